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
#ifndef DWELLCERT_ERROR_HPP
#define DWELLCERT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dwellcert {

/**
 * @brief Exception carrying a stable, machine-readable error code.
 *
 * Codes are short kebab-case strings ("dim-mismatch", "no-contraction-power", ...)
 * that callers and tests match on; what() holds the code followed by detail.
 */
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(detail.empty() ? code : code + ": " + detail), code_(std::move(code)) {}

    [[nodiscard]] const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace dwellcert

#endif // DWELLCERT_ERROR_HPP
