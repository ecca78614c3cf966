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
// Independent reference computations used only by the tests. Nothing here calls the
// library's norm, power, enumeration or inequality code.
#ifndef DWELLCERT_TESTS_ORACLES_HPP
#define DWELLCERT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "dwellcert/matrix.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const dwellcert::SquareMatrix& a) {
    Dense out(a.dim(), std::vector<double>(a.dim()));
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            out[i][j] = a(i, j);
        }
    }
    return out;
}

inline Dense multiply(const Dense& a, const Dense& b) {
    const std::size_t n = a.size();
    Dense out(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps.
inline std::vector<double> jacobi_eigenvalues(Dense a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += a[p][q] * a[p][q];
            }
        }
        if (off < 1e-300) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) {
                    continue;
                }
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a[i][i];
    }
    return out;
}

/// sqrt(largest eigenvalue of a^T a) via Jacobi.
inline double spectral_norm(const Dense& a) {
    const std::size_t n = a.size();
    Dense gram(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                gram[i][j] += a[k][i] * a[k][j];
            }
        }
    }
    const std::vector<double> ev = jacobi_eigenvalues(gram);
    return std::sqrt(std::max(0.0, *std::max_element(ev.begin(), ev.end())));
}

inline double spectral_norm(const dwellcert::SquareMatrix& a) { return spectral_norm(to_dense(a)); }

inline bool odometer_next(std::vector<std::size_t>& seq, std::size_t n) {
    for (std::size_t pos = seq.size(); pos-- > 0;) {
        if (++seq[pos] < n) {
            return true;
        }
        seq[pos] = 0;
    }
    return false;
}

/// Every sequence in {0..n-1}^L, 1 <= L <= max_len, whose runs except the last have length >= delta.
inline std::vector<std::vector<std::size_t>> admissible_sequences(std::size_t n, unsigned delta, std::size_t max_len) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::size_t> seq(len, 0);
        while (true) {
            bool ok = true;
            std::size_t run = 1;
            for (std::size_t t = 1; t < len && ok; ++t) {
                if (seq[t] == seq[t - 1]) {
                    ++run;
                } else {
                    ok = run >= delta;
                    run = 1;
                }
            }
            if (ok) {
                out.push_back(seq);
            }
            if (!odometer_next(seq, n)) {
                break;
            }
        }
    }
    return out;
}

/// Recursive count of admissible sequences (last run may be short).
inline unsigned long long count_recursive(std::size_t n, unsigned delta, std::size_t remaining, bool can_switch,
                                          unsigned run) {
    if (remaining == 0) {
        return 0;
    }
    unsigned long long total = 0;
    // extend current run
    total += 1 + count_recursive(n, delta, remaining - 1, run + 1 >= delta, run + 1);
    if (can_switch) {
        total += (n - 1) * (1 + count_recursive(n, delta, remaining - 1, delta <= 1, 1));
    }
    return total;
}

inline unsigned long long count_admissible(std::size_t n, unsigned delta, std::size_t max_len) {
    if (max_len == 0) {
        return 0;
    }
    return n * (1 + count_recursive(n, delta, max_len - 1, delta <= 1, 1));
}

/// Left-hand side of the dwell-time inequality written out directly from its definition.
inline double theorem_lhs(std::size_t n, unsigned delta, unsigned m, double rho, double lambda, double big_m,
                          double e_dd, double e_d1, double e_1d, double e_11) {
    const double nn = static_cast<double>(n);
    const double mm = m;
    const double d = delta;
    const double k1 = std::floor(mm / d);
    const double k2 = std::floor((nn - 1) * (mm - 1) / d);
    const double k3 = (nn - 1) * (mm - 1) - k2 * d;
    const double base = (nn - 1) * (mm - 1);
    const auto term = [&](double coef, double eps, double exponent) {
        return coef == 0.0 || eps == 0.0 ? 0.0 : coef * eps * std::pow(big_m, exponent);
    };
    const double bracket = term(k1 * k2, e_dd, base + mm - 2 * d) + term(k1 * k3, e_d1, base + mm - d - 1) +
                           term((mm - k1 * d) * k2, e_1d, base + mm - d - 1) + term((mm - k1 * d) * k3, e_11, base + mm - 2);
    return rho * std::exp(lambda * mm) + bracket * std::exp(lambda * (nn * (mm - 1) + 1));
}

inline dwellcert::SquareMatrix random_matrix(std::mt19937_64& rng, std::size_t d, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> entries(d * d);
    for (double& x : entries) {
        x = u(rng);
    }
    return dwellcert::SquareMatrix(d, std::move(entries));
}

} // namespace oracle

#endif // DWELLCERT_TESTS_ORACLES_HPP
