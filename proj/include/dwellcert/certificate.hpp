/*
 Copyright 2026 The dwellcert Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef DWELLCERT_CERTIFICATE_HPP
#define DWELLCERT_CERTIFICATE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "family.hpp"
#include "matrix.hpp"

namespace dwellcert {

inline constexpr unsigned kDefaultMMax = 500;

// ---------------------------------------------------------------------------
// Schur screening and the contraction power m
// ---------------------------------------------------------------------------

/// Evidence that one matrix is Schur stable: some power with norm below one.
struct SchurEvidence {
    bool contracts = false; ///< false means "undetermined within m_max", not unstable
    unsigned power = 0;     ///< first k with ||A^k|| < 1 (0 when none found)
    double norm = 0.0;      ///< ||A^power||, or the last norm tried
};

/**
 * @brief Per-matrix Schur screen: looks for k <= m_max with ||A_i^k|| < 1.
 *
 * Since rho(A) <= ||A^k||^(1/k), a hit proves Schur stability.
 */
[[nodiscard]] inline std::vector<SchurEvidence> schur_screen(const SubsystemFamily& fam, unsigned m_max) {
    std::vector<SchurEvidence> out;
    out.reserve(fam.size());
    for (const SquareMatrix& a : fam.matrices()) {
        SchurEvidence ev;
        SquareMatrix power = a;
        for (unsigned k = 1; k <= m_max; ++k) {
            if (k > 1) {
                power = mat_mul(power, a);
            }
            ev.norm = norm2(power);
            if (ev.norm < 1.0) {
                ev.contracts = true;
                ev.power = k;
                break;
            }
            if (!std::isfinite(ev.norm)) {
                break;
            }
        }
        out.push_back(ev);
    }
    return out;
}

struct ContractionPower {
    unsigned m = 0;
    double rho = 0.0;
};

/// Smallest m >= delta with max_i ||A_i^m|| < 1, and rho at that m.
[[nodiscard]] inline ContractionPower find_m(const SubsystemFamily& fam, DwellSpec delta, unsigned m_max) {
    std::vector<SquareMatrix> powers;
    powers.reserve(fam.size());
    for (const SquareMatrix& a : fam.matrices()) {
        powers.push_back(mat_pow(a, delta.value()));
    }
    for (unsigned m = delta.value(); m <= m_max; ++m) {
        if (m > delta.value()) {
            for (std::size_t i = 0; i < fam.size(); ++i) {
                powers[i] = mat_mul(powers[i], fam[i]);
            }
        }
        double rho = 0.0;
        for (const SquareMatrix& p : powers) {
            rho = std::max(rho, norm2(p));
        }
        if (rho < 1.0) {
            return {m, rho};
        }
    }
    throw Error("no-contraction-power", "no m in [" + std::to_string(delta.value()) + ", " + std::to_string(m_max) +
                                            "] with max ||A_i^m|| < 1");
}

// ---------------------------------------------------------------------------
// Integer scalars
// ---------------------------------------------------------------------------

struct KScalars {
    unsigned k1 = 0;
    unsigned k2 = 0;
    unsigned k3 = 0;
    unsigned k1_alt = 0; ///< the floor(delta/m) reading, reported but unused
};

/// K1 = floor(m/delta), K2 = floor((N-1)(m-1)/delta), K3 = (N-1)(m-1) - K2*delta.
[[nodiscard]] inline KScalars compute_k_scalars(std::size_t n, unsigned m, DwellSpec delta) {
    const unsigned d = delta.value();
    if (m < d || n < 2) {
        throw Error("bad-k-inputs", "need m >= delta and N >= 2");
    }
    const auto spread = static_cast<unsigned>((n - 1) * (m - 1));
    KScalars k;
    k.k1 = m / d;
    k.k2 = spread / d;
    k.k3 = spread - k.k2 * d;
    k.k1_alt = d / m;
    return k;
}

// ---------------------------------------------------------------------------
// Commutator bounds
// ---------------------------------------------------------------------------

/// eps_{p,q} for p, q in {1, delta}; indexed by which power is the dwell block.
struct EpsilonTable {
    double one_one = 0.0;
    double one_delta = 0.0;
    double delta_one = 0.0;
    double delta_delta = 0.0;
};

/**
 * @brief Tightest commutator bounds: eps_{p,q} = max over ordered i != j of ||E_ij^{p,q}||.
 *
 * eps_{1,delta} and eps_{delta,1} are the same set of norms (E_ij^{1,d} = -E_ji^{d,1}),
 * so one value is computed and stored in both slots.
 */
[[nodiscard]] inline EpsilonTable epsilon_table(const SubsystemFamily& fam, DwellSpec delta) {
    const unsigned d = delta.value();
    std::vector<SquareMatrix> powered;
    powered.reserve(fam.size());
    for (const SquareMatrix& a : fam.matrices()) {
        powered.push_back(mat_pow(a, d));
    }
    const auto bracket = [](const SquareMatrix& x, const SquareMatrix& y) {
        return norm2(mat_mul(x, y) - mat_mul(y, x));
    };
    EpsilonTable eps;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        for (std::size_t j = 0; j < fam.size(); ++j) {
            if (i == j) {
                continue;
            }
            eps.one_one = std::max(eps.one_one, bracket(fam[i], fam[j]));
            eps.one_delta = std::max(eps.one_delta, bracket(fam[i], powered[j]));
            eps.delta_delta = std::max(eps.delta_delta, bracket(powered[i], powered[j]));
        }
    }
    eps.delta_one = eps.one_delta;
    return eps;
}

// ---------------------------------------------------------------------------
// Certificate inequalities
// ---------------------------------------------------------------------------

/// Scalar inputs of the dwell-time inequality.
struct TheoremInputs {
    std::size_t n = 2;
    unsigned delta = 1;
    unsigned m = 1;
    double rho = 0.0;
    double lambda = 0.0;
    double big_m = 0.0; ///< M = max_i ||A_i||
    KScalars k;
    EpsilonTable eps;
};

namespace detail {

// coef * eps * M^exponent, where a zero coefficient or bound contributes exactly zero.
inline double bracket_term(double coef, double eps, double big_m, long exponent) {
    if (coef == 0.0 || eps == 0.0) {
        return 0.0;
    }
    if (exponent < 0 && big_m < 1e-300) {
        throw Error("degenerate-M", "M^" + std::to_string(exponent) + " with M = " + std::to_string(big_m));
    }
    return coef * eps * std::pow(big_m, static_cast<double>(exponent));
}

} // namespace detail

/// The four commutator categories of the bracket, before the e^{lambda(N(m-1)+1)} factor.
struct BracketTerms {
    double delta_delta = 0.0; ///< K1 K2 eps_{d,d} M^{(N-1)(m-1)+m-2d}
    double delta_one = 0.0;   ///< K1 K3 eps_{d,1} M^{(N-1)(m-1)+m-d-1}
    double one_delta = 0.0;   ///< (m-K1 d) K2 eps_{1,d} M^{(N-1)(m-1)+m-d-1}
    double one_one = 0.0;     ///< (m-K1 d) K3 eps_{1,1} M^{(N-1)(m-1)+m-2}

    [[nodiscard]] double sum() const noexcept { return delta_delta + delta_one + one_delta + one_one; }
};

[[nodiscard]] inline BracketTerms theorem_bracket(const TheoremInputs& in) {
    const long spread = static_cast<long>((in.n - 1) * (in.m - 1));
    const long m = in.m;
    const long d = in.delta;
    const double k1 = in.k.k1;
    const double k2 = in.k.k2;
    const double k3 = in.k.k3;
    const double leftover = static_cast<double>(m - static_cast<long>(in.k.k1) * d);
    BracketTerms t;
    t.delta_delta = detail::bracket_term(k1 * k2, in.eps.delta_delta, in.big_m, spread + m - 2 * d);
    t.delta_one = detail::bracket_term(k1 * k3, in.eps.delta_one, in.big_m, spread + m - d - 1);
    t.one_delta = detail::bracket_term(leftover * k2, in.eps.one_delta, in.big_m, spread + m - d - 1);
    t.one_one = detail::bracket_term(leftover * k3, in.eps.one_one, in.big_m, spread + m - 2);
    return t;
}

/// rho e^{lambda m} + bracket * e^{lambda (N(m-1)+1)}. Certificate holds iff this is <= 1.
[[nodiscard]] inline double theorem_lhs(const TheoremInputs& in) {
    const double window = static_cast<double>(in.n * (in.m - 1) + 1);
    return in.rho * std::exp(in.lambda * in.m) + theorem_bracket(in).sum() * std::exp(in.lambda * window);
}

enum class ExponentMode { as_printed, as_derived };

inline const char* to_string(ExponentMode mode) noexcept {
    return mode == ExponentMode::as_printed ? "printed" : "derived";
}

/// Arbitrary-switching (delta = 1) inequality with a single bound eps on ||E_ij^{1,1}||.
struct CorollaryInputs {
    std::size_t n = 2;
    unsigned m = 1;
    double rho = 0.0;
    double lambda = 0.0;
    double big_m = 0.0;
    double eps = 0.0;
};

/**
 * @brief rho e^{lambda m} + m(N-1)(m-1) eps M^e e^{lambda(N(m-1)+1)}.
 *
 * e = N(m-1)+1 in as_printed mode and N(m-1)-1 in as_derived mode; the derived exponent
 * is what the general inequality reduces to at delta = 1.
 */
[[nodiscard]] inline double corollary_lhs(const CorollaryInputs& in, ExponentMode mode) {
    const long base = static_cast<long>(in.n * (in.m - 1));
    const long exponent = mode == ExponentMode::as_printed ? base + 1 : base - 1;
    const double coef = static_cast<double>(in.m) * static_cast<double>((in.n - 1) * (in.m - 1));
    const double window = static_cast<double>(base + 1);
    return in.rho * std::exp(in.lambda * in.m) +
           detail::bracket_term(coef, in.eps, in.big_m, exponent) * std::exp(in.lambda * window);
}

// ---------------------------------------------------------------------------
// Decay rate
// ---------------------------------------------------------------------------

/// Either a user-fixed lambda or "find the largest certifiable lambda".
struct LambdaMode {
    std::optional<double> fixed;

    static LambdaMode maximize() { return {}; }
    static LambdaMode fixed_at(double lambda) { return {lambda}; }
};

inline constexpr double kLambdaTolerance = 1e-9;

/**
 * @brief Chooses the decay rate lambda.
 *
 * Fixed mode checks lambda > 0 and rho e^{lambda m} < 1 ("bad-lambda", "lambda-too-large")
 * and echoes it; whether the full inequality holds is left to the verdict. Maximize mode
 * bisects on (0, -ln(rho)/m) for the largest lambda with theorem_lhs <= 1, which is valid
 * because theorem_lhs is increasing in lambda. Throws "not-certifiable" when even
 * lambda -> 0 fails.
 */
[[nodiscard]] inline double find_lambda(const TheoremInputs& base, const LambdaMode& mode) {
    if (mode.fixed) {
        const double lambda = *mode.fixed;
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw Error("bad-lambda", "lambda must be a positive finite number");
        }
        if (!(base.rho * std::exp(lambda * base.m) < 1.0)) {
            throw Error("lambda-too-large", "rho e^{lambda m} = " + std::to_string(base.rho * std::exp(lambda * base.m)) +
                                                " is not below 1");
        }
        return lambda;
    }
    if (!(base.rho < 1.0)) {
        throw Error("not-certifiable", "rho >= 1");
    }
    TheoremInputs probe = base;
    const auto admissible = [&](double lambda) {
        probe.lambda = lambda;
        return base.rho * std::exp(lambda * base.m) < 1.0 && theorem_lhs(probe) <= 1.0;
    };
    if (!admissible(0.0)) {
        throw Error("not-certifiable", "inequality fails even as lambda -> 0");
    }
    double hi = 0.0;
    if (base.rho > 0.0) {
        hi = -std::log(base.rho) / base.m;
    } else {
        // rho == 0: grow the bracket until the inequality breaks or exp would overflow
        const double cap = 700.0 / static_cast<double>(base.n * (base.m - 1) + 1 + base.m);
        hi = std::min(1.0, cap);
        while (hi < cap && admissible(hi)) {
            hi = std::min(2.0 * hi, cap);
        }
        if (admissible(hi)) {
            return hi;
        }
    }
    double lo = 0.0;
    while (hi - lo > kLambdaTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (admissible(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (!(lo > 0.0)) {
        throw Error("not-certifiable", "no positive lambda satisfies the inequality");
    }
    return lo;
}

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

enum class Verdict { certified, not_certified };

inline const char* to_string(Verdict v) noexcept {
    return v == Verdict::certified ? "certified" : "not_certified";
}

struct CertifyOptions {
    unsigned m_max = kDefaultMMax;
    LambdaMode lambda = LambdaMode::maximize();
    std::optional<EpsilonTable> eps_override;
    ExponentMode exponent_mode = ExponentMode::as_printed;
};

/**
 * @brief Every scalar of the dwell-time certificate for one (family, delta).
 *
 * Fields that were not reached because an earlier step failed stay NaN (or 0 for the
 * integers); `reason` then names the failing step's error code.
 */
struct Certificate {
    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

    unsigned delta = 1;
    std::size_t n = 0;
    std::size_t dim = 0;
    unsigned m = 0;
    double rho = kUnset;
    double lambda = kUnset;
    double big_m = kUnset;
    KScalars k;
    EpsilonTable eps{kUnset, kUnset, kUnset, kUnset};
    bool eps_overridden = false;
    double rho_growth = kUnset; ///< rho e^{lambda m}
    BracketTerms bracket{kUnset, kUnset, kUnset, kUnset};
    double theorem_lhs = kUnset;
    double corollary_lhs_printed = kUnset;
    double corollary_lhs_derived = kUnset;
    Verdict verdict = Verdict::not_certified;
    std::string reason;
    std::optional<double> c; ///< induction-basis constant, filled by compute_basis_c
    CertifyOptions options;
    std::vector<SchurEvidence> schur;

    [[nodiscard]] bool certified() const noexcept { return verdict == Verdict::certified; }

    [[nodiscard]] TheoremInputs theorem_inputs() const {
        return {n, delta, m, rho, lambda, big_m, k, eps};
    }
};

/**
 * @brief Runs schur_screen, find_m, compute_k_scalars, epsilon_table, find_lambda and
 * theorem_lhs in that order. Never claims instability: any failure yields not_certified
 * with the error code in `reason`.
 */
[[nodiscard]] inline Certificate certify(const SubsystemFamily& fam, DwellSpec delta, const CertifyOptions& options = {}) {
    Certificate cert;
    cert.delta = delta.value();
    cert.n = fam.size();
    cert.dim = fam.dim();
    cert.options = options;

    try {
        cert.big_m = 0.0;
        for (const SquareMatrix& a : fam.matrices()) {
            cert.big_m = std::max(cert.big_m, norm2(a));
        }

        if (cert.big_m == 0.0) {
            // all-zero family: every product vanishes
            cert.m = delta.value();
            cert.rho = 0.0;
            cert.k = compute_k_scalars(cert.n, cert.m, delta);
            cert.eps = {0.0, 0.0, 0.0, 0.0};
            cert.lambda = options.lambda.fixed.value_or(1.0);
            cert.rho_growth = 0.0;
            cert.bracket = {0.0, 0.0, 0.0, 0.0};
            cert.theorem_lhs = 0.0;
            cert.corollary_lhs_printed = 0.0;
            cert.corollary_lhs_derived = 0.0;
            cert.verdict = Verdict::certified;
            cert.reason = "zero family";
            return cert;
        }

        cert.schur = schur_screen(fam, options.m_max);
        for (std::size_t i = 0; i < cert.schur.size(); ++i) {
            if (!cert.schur[i].contracts) {
                throw Error("schur-undetermined", fam.name(i) + " has no power with norm below 1 up to m_max = " +
                                                       std::to_string(options.m_max));
            }
        }

        const ContractionPower cp = find_m(fam, delta, options.m_max);
        cert.m = cp.m;
        cert.rho = cp.rho;
        cert.k = compute_k_scalars(cert.n, cert.m, delta);
        if (options.eps_override) {
            cert.eps = *options.eps_override;
            cert.eps_overridden = true;
        } else {
            cert.eps = epsilon_table(fam, delta);
        }

        std::string lambda_failure;
        try {
            cert.lambda = find_lambda(cert.theorem_inputs(), options.lambda);
        } catch (const Error& e) {
            if (options.lambda.fixed || e.code() != "not-certifiable") {
                throw;
            }
            // report the lambda -> 0 values so the size of the failure is visible
            lambda_failure = e.what();
            cert.lambda = 0.0;
        }

        const TheoremInputs in = cert.theorem_inputs();
        cert.rho_growth = cert.rho * std::exp(cert.lambda * cert.m);
        cert.bracket = theorem_bracket(in);
        cert.theorem_lhs = theorem_lhs(in);
        const CorollaryInputs cor{cert.n, cert.m, cert.rho, cert.lambda, cert.big_m, cert.eps.one_one};
        cert.corollary_lhs_printed = corollary_lhs(cor, ExponentMode::as_printed);
        cert.corollary_lhs_derived = corollary_lhs(cor, ExponentMode::as_derived);
        cert.verdict = cert.theorem_lhs <= 1.0 && lambda_failure.empty() ? Verdict::certified : Verdict::not_certified;
        if (!lambda_failure.empty()) {
            cert.reason = lambda_failure;
        } else if (!cert.certified()) {
            cert.reason = "inequality-fails";
        }
    } catch (const Error& e) {
        cert.verdict = Verdict::not_certified;
        cert.reason = e.what();
    }
    return cert;
}

} // namespace dwellcert

#endif // DWELLCERT_CERTIFICATE_HPP
