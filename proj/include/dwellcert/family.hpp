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
#ifndef DWELLCERT_FAMILY_HPP
#define DWELLCERT_FAMILY_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"

namespace dwellcert {

/**
 * @brief Ordered set of N >= 2 subsystem matrices of common dimension d.
 *
 * Subsystem ids are 0-based in the API (A_1 is index 0); text formats are 1-based.
 */
class SubsystemFamily {
public:
    SubsystemFamily() = default;

    explicit SubsystemFamily(std::vector<SquareMatrix> matrices, std::vector<std::string> labels = {})
        : matrices_(std::move(matrices)), labels_(std::move(labels)) {
        if (matrices_.size() < 2) {
            throw Error("bad-family", "a family needs at least 2 matrices, got " + std::to_string(matrices_.size()));
        }
        const std::size_t d = matrices_.front().dim();
        for (std::size_t i = 0; i < matrices_.size(); ++i) {
            if (matrices_[i].dim() != d) {
                throw Error("dim-mismatch", "matrix " + std::to_string(i + 1) + " is " +
                                                std::to_string(matrices_[i].dim()) + "x" +
                                                std::to_string(matrices_[i].dim()) + ", expected " +
                                                std::to_string(d) + "x" + std::to_string(d));
            }
        }
        if (!labels_.empty() && labels_.size() != matrices_.size()) {
            throw Error("bad-family", "got " + std::to_string(labels_.size()) + " labels for " +
                                          std::to_string(matrices_.size()) + " matrices");
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return matrices_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return matrices_.empty() ? 0 : matrices_.front().dim(); }
    [[nodiscard]] const SquareMatrix& operator[](std::size_t i) const { return matrices_.at(i); }
    [[nodiscard]] const std::vector<SquareMatrix>& matrices() const noexcept { return matrices_; }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// label if present, otherwise "A<i+1>".
    [[nodiscard]] std::string name(std::size_t i) const {
        return labels_.empty() ? "A" + std::to_string(i + 1) : labels_.at(i);
    }

private:
    std::vector<SquareMatrix> matrices_;
    std::vector<std::string> labels_;
};

/// Minimum dwell time in steps; delta >= 1.
class DwellSpec {
public:
    explicit DwellSpec(unsigned delta) : delta_(delta) {
        if (delta == 0) {
            throw Error("bad-delta", "minimum dwell time must be at least 1");
        }
    }
    [[nodiscard]] unsigned value() const noexcept { return delta_; }

private:
    unsigned delta_;
};

} // namespace dwellcert

#endif // DWELLCERT_FAMILY_HPP
