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
#ifndef DWELLCERT_MATRIX_HPP
#define DWELLCERT_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace dwellcert {

/**
 * @brief Dense d-by-d real matrix stored row-major.
 *
 * Construction from user data validates that every entry is finite and that the
 * entry count is d*d. Arithmetic results are not re-validated.
 */
class SquareMatrix {
public:
    SquareMatrix() = default;

    /// Zero matrix of dimension dim.
    explicit SquareMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {
        if (dim == 0) {
            throw Error("bad-dim", "matrix dimension must be at least 1");
        }
    }

    SquareMatrix(std::size_t dim, std::vector<double> entries) : dim_(dim), entries_(std::move(entries)) {
        if (dim == 0) {
            throw Error("bad-dim", "matrix dimension must be at least 1");
        }
        if (entries_.size() != dim * dim) {
            throw Error("bad-dim", "expected " + std::to_string(dim * dim) + " entries, got " +
                                       std::to_string(entries_.size()));
        }
        for (double v : entries_) {
            if (!std::isfinite(v)) {
                throw Error("non-finite", "matrix entries must be finite");
            }
        }
    }

    /// Row-major nested initializer, e.g. {{1, 2}, {3, 4}}.
    SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
        : SquareMatrix(rows.size(), flatten(rows)) {}

    static SquareMatrix identity(std::size_t dim) {
        SquareMatrix out(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            out(i, i) = 1.0;
        }
        return out;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }

    double& operator()(std::size_t row, std::size_t col) noexcept { return entries_[row * dim_ + col]; }
    double operator()(std::size_t row, std::size_t col) const noexcept { return entries_[row * dim_ + col]; }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    static std::vector<double> flatten(std::initializer_list<std::initializer_list<double>> rows) {
        std::vector<double> out;
        for (const auto& row : rows) {
            if (row.size() != rows.size()) {
                throw Error("bad-dim", "ragged matrix initializer");
            }
            out.insert(out.end(), row.begin(), row.end());
        }
        return out;
    }

    std::size_t dim_ = 0;
    std::vector<double> entries_;
};

inline void require_same_dim(const SquareMatrix& a, const SquareMatrix& b) {
    if (a.dim() != b.dim()) {
        throw Error("dim-mismatch",
                    std::to_string(a.dim()) + "x" + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + "x" +
                        std::to_string(b.dim()));
    }
}

/// Product a*b; inner sums accumulate k = 0..d-1 in order.
[[nodiscard]] inline SquareMatrix mat_mul(const SquareMatrix& a, const SquareMatrix& b) {
    require_same_dim(a, b);
    const std::size_t d = a.dim();
    SquareMatrix out(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                acc += a(i, k) * b(k, j);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

/// a^k by left fold: ((a*a)*a)*... ; k = 0 gives the identity.
[[nodiscard]] inline SquareMatrix mat_pow(const SquareMatrix& a, unsigned k) {
    if (k == 0) {
        return SquareMatrix::identity(a.dim());
    }
    SquareMatrix out = a;
    for (unsigned i = 1; i < k; ++i) {
        out = mat_mul(out, a);
    }
    return out;
}

[[nodiscard]] inline SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
    require_same_dim(a, b);
    SquareMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            out(i, j) = a(i, j) + b(i, j);
        }
    }
    return out;
}

[[nodiscard]] inline SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
    require_same_dim(a, b);
    SquareMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            out(i, j) = a(i, j) - b(i, j);
        }
    }
    return out;
}

[[nodiscard]] inline SquareMatrix operator*(double s, const SquareMatrix& a) {
    SquareMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            out(i, j) = s * a(i, j);
        }
    }
    return out;
}

[[nodiscard]] inline SquareMatrix transpose(const SquareMatrix& a) {
    SquareMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            out(j, i) = a(i, j);
        }
    }
    return out;
}

[[nodiscard]] inline std::vector<double> mat_vec(const SquareMatrix& a, std::span<const double> x) {
    if (x.size() != a.dim()) {
        throw Error("dim-mismatch", "vector of length " + std::to_string(x.size()) + " for " +
                                        std::to_string(a.dim()) + "x" + std::to_string(a.dim()) + " matrix");
    }
    std::vector<double> out(a.dim(), 0.0);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < a.dim(); ++k) {
            acc += a(i, k) * x[k];
        }
        out[i] = acc;
    }
    return out;
}

/// Euclidean norm, summed in index order.
[[nodiscard]] inline double euclidean_norm(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

/// Largest absolute entry.
[[nodiscard]] inline double max_abs_entry(const SquareMatrix& a) {
    double out = 0.0;
    for (double v : a.entries()) {
        out = std::max(out, std::abs(v));
    }
    return out;
}

/// E = a^p b^q - b^q a^p.
[[nodiscard]] inline SquareMatrix commutator(const SquareMatrix& a, const SquareMatrix& b, unsigned p, unsigned q) {
    require_same_dim(a, b);
    const SquareMatrix ap = mat_pow(a, p);
    const SquareMatrix bq = mat_pow(b, q);
    return mat_mul(ap, bq) - mat_mul(bq, ap);
}

enum class NormMethod { exact2x2, power_iteration };

inline const char* to_string(NormMethod m) noexcept {
    return m == NormMethod::exact2x2 ? "exact2x2" : "power_iteration";
}

/// Induced 2-norm with the method used and an estimate of its relative error.
struct NormValue {
    double value = 0.0;
    NormMethod method = NormMethod::exact2x2;
    double relative_error_bound = 0.0;
};

namespace detail {

inline constexpr std::size_t kPowerIterationMax = 10000;
inline constexpr double kPowerIterationTol = 1e-14;
inline constexpr std::uint64_t kRestartSeed = 0xC0FFEE;

struct PowerResult {
    double eigenvalue = 0.0;
    double relative_error = 0.0;
};

// Largest eigenvalue of the symmetric PSD matrix b, starting from v.
inline PowerResult symmetric_power_iteration(const SquareMatrix& b, std::vector<double> v) {
    const double v_norm = euclidean_norm(v);
    for (double& x : v) {
        x /= v_norm;
    }
    double mu = 0.0;
    for (std::size_t iter = 0; iter < kPowerIterationMax; ++iter) {
        std::vector<double> w = mat_vec(b, v);
        const double w_norm = euclidean_norm(w);
        if (w_norm == 0.0) {
            // start vector lies in the null space
            return {0.0, 0.0};
        }
        double next_mu = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            next_mu += v[i] * w[i];
        }
        const double change = std::abs(next_mu - mu) / next_mu;
        mu = next_mu;
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = w[i] / w_norm;
        }
        if (iter > 0 && change < kPowerIterationTol) {
            const std::vector<double> bv = mat_vec(b, v);
            double residual = 0.0;
            double rayleigh = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                rayleigh += v[i] * bv[i];
            }
            for (std::size_t i = 0; i < v.size(); ++i) {
                const double r = bv[i] - rayleigh * v[i];
                residual += r * r;
            }
            const double rel_residual = std::sqrt(residual) / rayleigh;
            return {rayleigh, std::max(change, rel_residual * rel_residual)};
        }
    }
    throw Error("norm-no-converge", "power iteration did not converge in " + std::to_string(kPowerIterationMax) +
                                        " iterations");
}

} // namespace detail

/**
 * @brief Largest singular value of a.
 *
 * d = 2 uses the closed-form largest eigenvalue of a^T a. Larger matrices run symmetric
 * power iteration on a^T a from the normalized all-ones vector and again from a fixed
 * pseudo-random vector; the larger Rayleigh quotient wins. Throws "norm-no-converge"
 * when neither run settles within 10 000 iterations.
 */
[[nodiscard]] inline NormValue spectral_norm(const SquareMatrix& a) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (a.dim() == 1) {
        return {std::abs(a(0, 0)), NormMethod::exact2x2, eps};
    }
    if (a.dim() == 2) {
        // a^T a = [[p, r], [r, s]]
        const double p = a(0, 0) * a(0, 0) + a(1, 0) * a(1, 0);
        const double s = a(0, 1) * a(0, 1) + a(1, 1) * a(1, 1);
        const double r = a(0, 0) * a(0, 1) + a(1, 0) * a(1, 1);
        const double top = 0.5 * (p + s) + std::hypot(0.5 * (p - s), r);
        return {std::sqrt(std::max(top, 0.0)), NormMethod::exact2x2, 4.0 * eps};
    }
    const SquareMatrix gram = mat_mul(transpose(a), a);
    const std::size_t d = a.dim();
    const detail::PowerResult from_ones = detail::symmetric_power_iteration(gram, std::vector<double>(d, 1.0));

    std::mt19937_64 rng(detail::kRestartSeed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> start(d);
    for (double& x : start) {
        x = unit(rng);
    }
    const detail::PowerResult from_random = detail::symmetric_power_iteration(gram, std::move(start));

    const detail::PowerResult& best = from_random.eigenvalue > from_ones.eigenvalue ? from_random : from_ones;
    // sqrt halves the relative error of the eigenvalue
    return {std::sqrt(best.eigenvalue), NormMethod::power_iteration, 0.5 * best.relative_error + 4.0 * eps};
}

/// Shorthand for spectral_norm(a).value.
[[nodiscard]] inline double norm2(const SquareMatrix& a) { return spectral_norm(a).value; }

} // namespace dwellcert

#endif // DWELLCERT_MATRIX_HPP
