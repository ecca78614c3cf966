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
#ifndef DWELLCERT_SWITCHING_HPP
#define DWELLCERT_SWITCHING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "family.hpp"
#include "matrix.hpp"
#include "word.hpp"

namespace dwellcert {

// ---------------------------------------------------------------------------
// Switching signals
// ---------------------------------------------------------------------------

/// A finite dwell-admissible prefix sigma(0), sigma(1), ... (0-based subsystem ids).
struct SwitchingSignal {
    std::vector<std::size_t> indices;
    unsigned delta = 1;
    std::uint64_t seed = 0;

    /// Runs in time order (sigma(0) first).
    [[nodiscard]] std::vector<Run> runs() const {
        std::vector<Run> out;
        for (std::size_t idx : indices) {
            if (!out.empty() && out.back().index == idx) {
                ++out.back().power;
            } else {
                out.push_back({idx, 1});
            }
        }
        return out;
    }

    /// tau_0 = 0 < tau_1 < ... : times at which the active subsystem changes.
    [[nodiscard]] std::vector<std::size_t> switching_instants() const {
        std::vector<std::size_t> out;
        for (std::size_t t = 0; t < indices.size(); ++t) {
            if (t == 0 || indices[t] != indices[t - 1]) {
                out.push_back(t);
            }
        }
        return out;
    }
};

inline constexpr unsigned kDefaultMaxExtra = 3;

/**
 * @brief Random dwell-delta signal of the given horizon.
 *
 * Run lengths are uniform on {delta, ..., delta + max_extra}; the first index is uniform on
 * the family and every later one uniform on the others. The final run is cut at horizon.
 */
[[nodiscard]] inline SwitchingSignal generate_signal(std::size_t n, unsigned delta, std::size_t horizon,
                                                     std::uint64_t seed, unsigned max_extra = kDefaultMaxExtra) {
    if (n < 2 || delta == 0 || horizon == 0) {
        throw Error("bad-signal-inputs", "need N >= 2, delta >= 1, horizon >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    std::uniform_int_distribution<std::size_t> other(0, n - 2);
    std::uniform_int_distribution<unsigned> length(delta, delta + max_extra);

    SwitchingSignal sig;
    sig.delta = delta;
    sig.seed = seed;
    sig.indices.reserve(horizon);
    std::size_t current = first(rng);
    while (sig.indices.size() < horizon) {
        const std::size_t run = std::min<std::size_t>(length(rng), horizon - sig.indices.size());
        sig.indices.insert(sig.indices.end(), run, current);
        const std::size_t r = other(rng);
        current = r < current ? r : r + 1;
    }
    return sig;
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct TrajectoryRecord {
    std::size_t trial_id = 0;
    std::vector<double> x0;
    std::vector<double> norms; ///< ||x(t)|| for t = 0..T
    std::uint64_t signal_seed = 0;
};

/// Iterates x(t+1) = A_{sigma(t)} x(t) for T steps.
[[nodiscard]] inline TrajectoryRecord simulate(const SubsystemFamily& fam, const SwitchingSignal& signal,
                                               std::span<const double> x0, std::size_t steps) {
    if (x0.size() != fam.dim()) {
        throw Error("dim-mismatch", "initial state has " + std::to_string(x0.size()) + " entries, family dimension is " +
                                        std::to_string(fam.dim()));
    }
    if (steps > signal.indices.size()) {
        throw Error("signal-too-short", "horizon " + std::to_string(steps) + " exceeds signal length " +
                                            std::to_string(signal.indices.size()));
    }
    TrajectoryRecord rec;
    rec.x0.assign(x0.begin(), x0.end());
    rec.signal_seed = signal.seed;
    rec.norms.reserve(steps + 1);
    std::vector<double> x = rec.x0;
    rec.norms.push_back(euclidean_norm(x));
    for (std::size_t t = 0; t < steps; ++t) {
        x = mat_vec(fam[signal.indices[t]], x);
        rec.norms.push_back(euclidean_norm(x));
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of admissible prefixes
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultEnumerationGuard = 10'000'000;

/// Word cap: DWELLCERT_ENUM_GUARD if set to a positive integer, otherwise 10^7.
[[nodiscard]] inline std::uint64_t enumeration_guard() {
    if (const char* env = std::getenv("DWELLCERT_ENUM_GUARD")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return v;
        }
    }
    return kDefaultEnumerationGuard;
}

/**
 * @brief Number of admissible prefixes of length 1..max_len.
 *
 * Tracks sequences by the length of their final run, capped at delta. Saturates at
 * uint64 max.
 */
[[nodiscard]] inline std::uint64_t count_admissible_words(std::size_t n, unsigned delta, std::size_t max_len) {
    if (n == 0 || delta == 0) {
        return 0;
    }
    constexpr long double kSat = static_cast<long double>(std::numeric_limits<std::uint64_t>::max());
    // tail[r-1]: sequences whose last run has length r (r == delta means ">= delta")
    std::vector<long double> tail(delta, 0.0L);
    tail[0] = static_cast<long double>(n);
    long double total = 0.0L;
    for (std::size_t len = 1; len <= max_len; ++len) {
        for (long double v : tail) {
            total += v;
        }
        if (total >= kSat) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        std::vector<long double> next(delta, 0.0L);
        for (unsigned r = 1; r <= delta; ++r) {
            next[std::min(r + 1, delta) - 1] += tail[r - 1];
        }
        next[0] += tail[delta - 1] * static_cast<long double>(n - 1);
        tail = std::move(next);
    }
    return static_cast<std::uint64_t>(total);
}

namespace detail {

template <typename Visit>
void walk_admissible(std::size_t n, unsigned delta, std::size_t max_len, std::vector<std::size_t>& seq,
                     unsigned run_length, Visit& visit) {
    if (seq.size() == max_len) {
        return;
    }
    const std::size_t last = seq.back();
    for (std::size_t next = 0; next < n; ++next) {
        const bool same = next == last;
        if (!same && run_length < delta) {
            continue;
        }
        seq.push_back(next);
        visit(std::span<const std::size_t>(seq));
        walk_admissible(n, delta, max_len, seq, same ? run_length + 1 : 1, visit);
        seq.pop_back();
    }
}

} // namespace detail

/**
 * @brief Calls visit(sequence) for every admissible time sequence of length 1..max_len.
 *
 * Sequences are sigma(0..L-1), visited depth-first in lexicographic order, so every
 * prefix of the current sequence has already been visited. Throws
 * "enumeration-too-large" when the count exceeds guard.
 */
template <typename Visit>
void for_each_admissible_sequence(std::size_t n, unsigned delta, std::size_t max_len, Visit&& visit,
                                  std::uint64_t guard = enumeration_guard()) {
    if (delta == 0) {
        throw Error("bad-delta", "minimum dwell time must be at least 1");
    }
    const std::uint64_t total = count_admissible_words(n, delta, max_len);
    if (total > guard) {
        throw Error("enumeration-too-large", std::to_string(total) + " words exceed the guard of " +
                                                 std::to_string(guard));
    }
    if (max_len == 0) {
        return;
    }
    std::vector<std::size_t> seq;
    seq.reserve(max_len);
    for (std::size_t first = 0; first < n; ++first) {
        seq.push_back(first);
        visit(std::span<const std::size_t>(seq));
        detail::walk_admissible(n, delta, max_len, seq, 1, visit);
        seq.pop_back();
    }
}

/// Product word A_{s(L-1)} ... A_{s(0)} of a time sequence.
[[nodiscard]] inline BlockWord word_from_sequence(std::span<const std::size_t> seq) {
    BlockWord w;
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
        w.append({*it, 1});
    }
    return w;
}

/// Calls visit(word) for every admissible initial segment of length <= max_len.
template <typename Visit>
void enumerate_admissible_words(std::size_t n, unsigned delta, std::size_t max_len, Visit&& visit,
                                std::uint64_t guard = enumeration_guard()) {
    for_each_admissible_sequence(
        n, delta, max_len, [&](std::span<const std::size_t> seq) { visit(word_from_sequence(seq)); }, guard);
}

namespace detail {

// Visits (length, ||product||) for every admissible prefix, reusing prefix products.
template <typename Visit>
void for_each_prefix_norm(const SubsystemFamily& fam, unsigned delta, std::size_t max_len, Visit&& visit,
                          std::uint64_t guard) {
    std::vector<SquareMatrix> products(max_len + 1, SquareMatrix::identity(fam.dim()));
    for_each_admissible_sequence(
        fam.size(), delta, max_len,
        [&](std::span<const std::size_t> seq) {
            const std::size_t len = seq.size();
            products[len] = mat_mul(fam[seq.back()], products[len - 1]);
            visit(len, norm2(products[len]));
        },
        guard);
}

} // namespace detail

/**
 * @brief Induction-basis constant: max over admissible words with |W| <= N(m-1)+1 of
 * ||W|| e^{lambda |W|}, floored at 1.
 */
[[nodiscard]] inline double compute_basis_c(const SubsystemFamily& fam, unsigned delta, double lambda, unsigned m,
                                            std::uint64_t guard = enumeration_guard()) {
    const std::size_t window = fam.size() * (m - 1) + 1;
    double c = 1.0;
    detail::for_each_prefix_norm(
        fam, delta, window,
        [&](std::size_t len, double norm) { c = std::max(c, norm * std::exp(lambda * static_cast<double>(len))); },
        guard);
    return c;
}

struct GuesBoundReport {
    double c = 1.0;
    double lambda = 0.0;
    double max_violation = -std::numeric_limits<double>::infinity(); ///< <= 0 means every word passed
    std::uint64_t words_checked = 0;
    std::size_t worst_length = 0;

    [[nodiscard]] bool pass() const noexcept { return words_checked > 0 && max_violation <= 1e-12 * c; }
};

/// Checks ||W|| <= c e^{-lambda |W|} for every admissible word with |W| <= max_len.
[[nodiscard]] inline GuesBoundReport brute_force_bound_check(const SubsystemFamily& fam, unsigned delta, double lambda,
                                                             double c, std::size_t max_len,
                                                             std::uint64_t guard = enumeration_guard()) {
    GuesBoundReport rep;
    rep.c = c;
    rep.lambda = lambda;
    detail::for_each_prefix_norm(
        fam, delta, max_len,
        [&](std::size_t len, double norm) {
            ++rep.words_checked;
            const double violation = norm - c * std::exp(-lambda * static_cast<double>(len));
            if (violation > rep.max_violation) {
                rep.max_violation = violation;
                rep.worst_length = len;
            }
        },
        guard);
    return rep;
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

/// Exponential envelope ||x(t)|| <= c e^{-lambda t} ||x0||.
struct DecayBound {
    double lambda = 0.0;
    double c = 1.0;
};

struct MonteCarloOptions {
    std::size_t trials = 1000;
    std::size_t horizon = 100;
    std::uint64_t seed = 0;
    unsigned max_extra = kDefaultMaxExtra;
    double x0_box = 100.0;                 ///< x0 uniform on [-x0_box, x0_box]^d
    std::optional<std::vector<double>> x0; ///< fixed initial state for every trial
    std::optional<DecayBound> bound;
};

struct MonteCarloSummary {
    std::vector<double> max_ratio;  ///< per t: max over trials of ||x(t)|| / ||x0||
    std::vector<double> mean_norm;  ///< per t: mean of ||x(t)||
    std::vector<double> max_norm;   ///< per t: max of ||x(t)||
    bool bound_checked = false;
    bool bound_pass = true;
    std::size_t violations = 0;
    double worst_slack = -std::numeric_limits<double>::infinity(); ///< max of ||x(t)|| - c e^{-lambda t} ||x0||
};

struct MonteCarloResult {
    std::vector<TrajectoryRecord> records;
    MonteCarloSummary summary;
};

/**
 * @brief Simulates independent (signal, x0) draws and checks the decay envelope pointwise.
 *
 * Trial k uses signal seed `seed + k`; its x0 comes from a separate stream seeded from the
 * same value, so any trial can be replayed alone.
 */
[[nodiscard]] inline MonteCarloResult monte_carlo(const SubsystemFamily& fam, unsigned delta,
                                                  const MonteCarloOptions& opt) {
    if (opt.trials == 0) {
        throw Error("bad-trials", "need at least one trial");
    }
    if (opt.x0 && opt.x0->size() != fam.dim()) {
        throw Error("dim-mismatch", "initial state has " + std::to_string(opt.x0->size()) +
                                        " entries, family dimension is " + std::to_string(fam.dim()));
    }
    MonteCarloResult out;
    out.records.reserve(opt.trials);
    MonteCarloSummary& sum = out.summary;
    sum.max_ratio.assign(opt.horizon + 1, 0.0);
    sum.mean_norm.assign(opt.horizon + 1, 0.0);
    sum.max_norm.assign(opt.horizon + 1, 0.0);
    sum.bound_checked = opt.bound.has_value();

    for (std::size_t trial = 0; trial < opt.trials; ++trial) {
        const std::uint64_t trial_seed = opt.seed + trial;
        std::vector<double> x0;
        if (opt.x0) {
            x0 = *opt.x0;
        } else {
            std::seed_seq seq{static_cast<std::uint32_t>(trial_seed), static_cast<std::uint32_t>(trial_seed >> 32),
                              0x5eedu};
            std::mt19937_64 rng(seq);
            std::uniform_real_distribution<double> box(-opt.x0_box, opt.x0_box);
            x0.resize(fam.dim());
            for (double& v : x0) {
                v = box(rng);
            }
        }
        const SwitchingSignal sig = generate_signal(fam.size(), delta, std::max<std::size_t>(opt.horizon, 1),
                                                    trial_seed, opt.max_extra);
        TrajectoryRecord rec = simulate(fam, sig, x0, opt.horizon);
        rec.trial_id = trial;

        const double n0 = rec.norms.front();
        for (std::size_t t = 0; t < rec.norms.size(); ++t) {
            const double norm = rec.norms[t];
            sum.mean_norm[t] += norm / static_cast<double>(opt.trials);
            sum.max_norm[t] = std::max(sum.max_norm[t], norm);
            if (n0 > 0.0) {
                sum.max_ratio[t] = std::max(sum.max_ratio[t], norm / n0);
            }
            if (opt.bound) {
                const double envelope = opt.bound->c * std::exp(-opt.bound->lambda * static_cast<double>(t)) * n0;
                const double slack = norm - envelope;
                sum.worst_slack = std::max(sum.worst_slack, slack);
                if (slack > 1e-12 * opt.bound->c * n0) {
                    ++sum.violations;
                    sum.bound_pass = false;
                }
            }
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

/// CSV with header `trial,t,norm`, one row per (trial, t), 17 significant digits.
inline void write_trajectory_csv(std::ostream& os, std::span<const TrajectoryRecord> records) {
    os << "trial,t,norm\n";
    const auto old_flags = os.flags();
    const auto old_precision = os.precision();
    os << std::setprecision(17);
    for (const TrajectoryRecord& rec : records) {
        for (std::size_t t = 0; t < rec.norms.size(); ++t) {
            os << rec.trial_id << ',' << t << ',' << rec.norms[t] << '\n';
        }
    }
    os.flags(old_flags);
    os.precision(old_precision);
}

} // namespace dwellcert

#endif // DWELLCERT_SWITCHING_HPP
