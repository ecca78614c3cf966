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
#ifndef DWELLCERT_WORD_HPP
#define DWELLCERT_WORD_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "family.hpp"
#include "matrix.hpp"

namespace dwellcert {

/// A maximal block A_index^power inside a word.
struct Run {
    std::size_t index = 0;
    unsigned power = 1;

    friend bool operator==(const Run&, const Run&) = default;
};

/**
 * @brief Matrix word as a sequence of runs, leftmost factor first.
 *
 * Adjacent runs with the same index are merged on construction so that neighbours
 * always differ. A product A_{s(t-1)}...A_{s(0)} is stored latest-leftmost.
 */
class BlockWord {
public:
    BlockWord() = default;

    explicit BlockWord(std::span<const Run> runs) {
        for (const Run& r : runs) {
            append(r);
        }
    }
    BlockWord(std::initializer_list<Run> runs) : BlockWord(std::span<const Run>(runs.begin(), runs.size())) {}

    void append(Run r) {
        if (r.power == 0) {
            throw Error("bad-word", "run powers must be positive");
        }
        if (!runs_.empty() && runs_.back().index == r.index) {
            runs_.back().power += r.power;
        } else {
            runs_.push_back(r);
        }
        length_ += r.power;
    }

    [[nodiscard]] const std::vector<Run>& runs() const noexcept { return runs_; }
    [[nodiscard]] std::size_t total_length() const noexcept { return length_; }
    [[nodiscard]] bool empty() const noexcept { return runs_.empty(); }

    [[nodiscard]] std::size_t occurrences(std::size_t index) const noexcept {
        std::size_t n = 0;
        for (const Run& r : runs_) {
            if (r.index == index) {
                n += r.power;
            }
        }
        return n;
    }

    friend bool operator==(const BlockWord&, const BlockWord&) = default;

private:
    std::vector<Run> runs_;
    std::size_t length_ = 0;
};

/**
 * @brief Parses `idx^pow` tokens separated by whitespace, 1-based indices ("3^2 2^2 1^3").
 *
 * A bare `idx` means power 1. Errors are "parse-error" with a 1-based column.
 */
[[nodiscard]] inline BlockWord parse_word(std::string_view text) {
    BlockWord word;
    std::size_t pos = 0;
    const auto fail = [&](std::size_t at, const std::string& what) {
        throw Error("parse-error", "column " + std::to_string(at + 1) + ": " + what);
    };
    const auto read_number = [&](const char* what) -> unsigned long {
        const std::size_t start = pos;
        unsigned long value = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            value = value * 10 + static_cast<unsigned long>(text[pos] - '0');
            if (value > 1000000) {
                fail(start, std::string(what) + " too large");
            }
            ++pos;
        }
        if (pos == start) {
            fail(start, std::string("expected ") + what);
        }
        return value;
    };
    while (true) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (pos == text.size()) {
            break;
        }
        const std::size_t token_start = pos;
        const unsigned long index = read_number("subsystem index");
        if (index == 0) {
            fail(token_start, "subsystem indices are 1-based");
        }
        unsigned long power = 1;
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            const std::size_t power_start = pos;
            power = read_number("power");
            if (power == 0) {
                fail(power_start, "power must be positive");
            }
        }
        if (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) {
            fail(pos, std::string("unexpected character '") + text[pos] + "'");
        }
        word.append({static_cast<std::size_t>(index - 1), static_cast<unsigned>(power)});
    }
    if (word.empty()) {
        fail(0, "empty word");
    }
    return word;
}

/// Inverse of parse_word.
[[nodiscard]] inline std::string to_grammar(const BlockWord& word) {
    std::string out;
    for (const Run& r : word.runs()) {
        if (!out.empty()) {
            out += ' ';
        }
        out += std::to_string(r.index + 1);
        if (r.power != 1) {
            out += '^' + std::to_string(r.power);
        }
    }
    return out;
}

/// Readable form, e.g. "A3^2 A2^2 A1^3".
[[nodiscard]] inline std::string format_word(const BlockWord& word) {
    std::string out;
    for (const Run& r : word.runs()) {
        if (!out.empty()) {
            out += ' ';
        }
        out += 'A' + std::to_string(r.index + 1);
        if (r.power != 1) {
            out += '^' + std::to_string(r.power);
        }
    }
    return out;
}

/// Product of the word's factors, left to right.
[[nodiscard]] inline SquareMatrix word_product(const BlockWord& word, const SubsystemFamily& fam) {
    SquareMatrix out = SquareMatrix::identity(fam.dim());
    for (const Run& r : word.runs()) {
        if (r.index >= fam.size()) {
            throw Error("bad-index", "subsystem " + std::to_string(r.index + 1) + " not in family of " +
                                         std::to_string(fam.size()));
        }
        for (unsigned k = 0; k < r.power; ++k) {
            out = mat_mul(out, fam[r.index]);
        }
    }
    return out;
}

/// Every run but the last has power >= delta; the last may be cut short.
[[nodiscard]] inline bool validate_dwell(std::span<const Run> runs, unsigned delta) {
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        if (runs[i].power < delta) {
            return false;
        }
    }
    return true;
}

[[nodiscard]] inline bool validate_dwell(const BlockWord& word, unsigned delta) {
    return validate_dwell(std::span<const Run>(word.runs()), delta);
}

/// Smallest subsystem index occurring at least m times; "no-dominant-index" otherwise.
[[nodiscard]] inline std::size_t choose_target(const BlockWord& word, unsigned m) {
    std::size_t best = 0;
    bool found = false;
    for (const Run& r : word.runs()) {
        if ((!found || r.index < best) && word.occurrences(r.index) >= m) {
            best = r.index;
            found = true;
        }
    }
    if (!found) {
        throw Error("no-dominant-index", "no subsystem occurs " + std::to_string(m) + " times in " + format_word(word));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------------

/// E_ij^{p,q} = A_i^p A_j^q - A_j^q A_i^p.
struct CommutatorMarker {
    std::size_t i = 0;
    std::size_t j = 0;
    unsigned p = 1;
    unsigned q = 1;

    friend bool operator==(const CommutatorMarker&, const CommutatorMarker&) = default;
};

/// Which kind of moving unit crossed which kind of chunk: (unit, chunk) in {delta-block, single}^2.
enum class TermCategory { delta_delta, delta_one, one_delta, one_one };

inline constexpr std::array<TermCategory, 4> kTermCategories{TermCategory::delta_delta, TermCategory::delta_one,
                                                             TermCategory::one_delta, TermCategory::one_one};

inline const char* to_string(TermCategory c) noexcept {
    switch (c) {
    case TermCategory::delta_delta: return "delta,delta";
    case TermCategory::delta_one: return "delta,1";
    case TermCategory::one_delta: return "1,delta";
    case TermCategory::one_one: return "1,1";
    }
    return "?";
}

struct DecompositionTerm {
    int sign = 1;
    BlockWord prefix;
    std::optional<CommutatorMarker> commutator;
    BlockWord suffix;
    std::optional<TermCategory> category;
};

struct CategoryCounts {
    std::array<std::size_t, 4> by_category{}; ///< indexed in kTermCategories order

    [[nodiscard]] std::size_t operator[](TermCategory c) const noexcept {
        return by_category[static_cast<std::size_t>(c)];
    }
    [[nodiscard]] std::size_t total() const noexcept {
        return by_category[0] + by_category[1] + by_category[2] + by_category[3];
    }
};

/// word = sum of terms; terms[0] is the leading target^m term.
struct Decomposition {
    BlockWord word;
    std::size_t target = 0;
    unsigned m = 1;
    unsigned delta = 1;
    std::vector<DecompositionTerm> terms;
    CategoryCounts counts;
};

namespace detail {

enum class PieceKind { unit_block, unit_single, chunk_block, chunk_single, rest };

struct Piece {
    std::size_t index = 0;
    unsigned power = 1;
    PieceKind kind = PieceKind::rest;

    [[nodiscard]] bool is_unit() const noexcept {
        return kind == PieceKind::unit_block || kind == PieceKind::unit_single;
    }
};

inline BlockWord merge_pieces(std::span<const Piece> pieces) {
    BlockWord out;
    for (const Piece& p : pieces) {
        out.append({p.index, p.power});
    }
    return out;
}

inline void push_chunks(std::vector<Piece>& pieces, const Run& r, unsigned delta) {
    for (unsigned b = 0; b < r.power / delta; ++b) {
        pieces.push_back({r.index, delta, PieceKind::chunk_block});
    }
    for (unsigned s = 0; s < r.power % delta; ++s) {
        pieces.push_back({r.index, 1, PieceKind::chunk_single});
    }
}

} // namespace detail

/**
 * @brief Rewrites word as target^m * L1 plus single-commutator terms.
 *
 * The leftmost m occurrences of target are cut into moving units, per run: the
 * (length mod delta) leftmost letters as singles, the rest as delta-blocks. Other runs are
 * cut into delta-blocks followed by singles. Units move to the front left to right, one
 * adjacent swap at a time, using Y^q X^p = X^p Y^q - E_XY^{p,q}; each swap emits one
 * negative commutator term that is never expanded further. Commutator terms are listed
 * last-emitted first.
 */
[[nodiscard]] inline Decomposition decompose(const BlockWord& word, std::size_t target, unsigned m, unsigned delta) {
    if (delta == 0 || m == 0) {
        throw Error("bad-decompose-inputs", "m and delta must be positive");
    }
    if (word.occurrences(target) < m) {
        throw Error("target-too-rare", "A" + std::to_string(target + 1) + " occurs " +
                                           std::to_string(word.occurrences(target)) + " < m = " + std::to_string(m) +
                                           " times");
    }
    using detail::Piece;
    using detail::PieceKind;

    std::vector<Piece> pieces;
    unsigned needed = m;
    for (const Run& r : word.runs()) {
        if (r.index == target && needed > 0) {
            const unsigned take = std::min(r.power, needed);
            for (unsigned s = 0; s < take % delta; ++s) {
                pieces.push_back({target, 1, PieceKind::unit_single});
            }
            for (unsigned b = 0; b < take / delta; ++b) {
                pieces.push_back({target, delta, PieceKind::unit_block});
            }
            if (r.power > take) {
                pieces.push_back({target, r.power - take, PieceKind::rest});
            }
            needed -= take;
        } else if (r.index == target) {
            pieces.push_back({target, r.power, PieceKind::rest});
        } else {
            detail::push_chunks(pieces, r, delta);
        }
    }

    Decomposition dec;
    dec.word = word;
    dec.target = target;
    dec.m = m;
    dec.delta = delta;

    std::vector<DecompositionTerm> emitted;
    std::size_t front = 0;
    for (std::size_t pos = 0; pos < pieces.size(); ++pos) {
        if (!pieces[pos].is_unit()) {
            continue;
        }
        for (std::size_t k = pos; k > front; --k) {
            const Piece& unit = pieces[k];
            const Piece& chunk = pieces[k - 1];
            const bool unit_block = unit.kind == PieceKind::unit_block;
            const bool chunk_block = chunk.kind == PieceKind::chunk_block;
            DecompositionTerm term;
            term.sign = -1;
            term.prefix = detail::merge_pieces(std::span<const Piece>(pieces).first(k - 1));
            term.commutator = CommutatorMarker{target, chunk.index, unit.power, chunk.power};
            term.suffix = detail::merge_pieces(std::span<const Piece>(pieces).subspan(k + 1));
            term.category = unit_block ? (chunk_block ? TermCategory::delta_delta : TermCategory::delta_one)
                                       : (chunk_block ? TermCategory::one_delta : TermCategory::one_one);
            ++dec.counts.by_category[static_cast<std::size_t>(*term.category)];
            emitted.push_back(std::move(term));
            std::swap(pieces[k - 1], pieces[k]);
        }
        ++front;
    }

    DecompositionTerm leading;
    leading.prefix = detail::merge_pieces(pieces);
    dec.terms.push_back(std::move(leading));
    dec.terms.insert(dec.terms.end(), std::make_move_iterator(emitted.rbegin()),
                     std::make_move_iterator(emitted.rend()));
    return dec;
}

/// Signed readable form, e.g. "-A1 E_{1,3}^{2,2} A2^2".
[[nodiscard]] inline std::string format_term(const DecompositionTerm& term) {
    std::string out = term.sign < 0 ? "-" : "+";
    std::string body = format_word(term.prefix);
    if (term.commutator) {
        const CommutatorMarker& c = *term.commutator;
        if (!body.empty()) {
            body += ' ';
        }
        body += "E_{" + std::to_string(c.i + 1) + ',' + std::to_string(c.j + 1) + "}^{" + std::to_string(c.p) + ',' +
                std::to_string(c.q) + '}';
    }
    if (!term.suffix.empty()) {
        body += ' ' + format_word(term.suffix);
    }
    return out + body;
}

/// Evaluates one term, commutator expanded as A_i^p A_j^q - A_j^q A_i^p.
[[nodiscard]] inline SquareMatrix evaluate_term(const DecompositionTerm& term, const SubsystemFamily& fam) {
    SquareMatrix value = word_product(term.prefix, fam);
    if (term.commutator) {
        const CommutatorMarker& c = *term.commutator;
        if (c.i >= fam.size() || c.j >= fam.size()) {
            throw Error("bad-index", "commutator index outside family");
        }
        value = mat_mul(value, commutator(fam[c.i], fam[c.j], c.p, c.q));
    }
    value = mat_mul(value, word_product(term.suffix, fam));
    return static_cast<double>(term.sign) * value;
}

struct DecompositionCheck {
    SquareMatrix lhs;
    SquareMatrix rhs;
    double residual_norm = 0.0;
    double scale = 0.0; ///< largest norm among lhs and the individual terms
};

/// Compares the word's product with the signed sum of evaluated terms.
[[nodiscard]] inline DecompositionCheck evaluate_decomposition(const Decomposition& dec, const SubsystemFamily& fam) {
    DecompositionCheck out;
    out.lhs = word_product(dec.word, fam);
    out.rhs = SquareMatrix(fam.dim());
    out.scale = norm2(out.lhs);
    for (const DecompositionTerm& term : dec.terms) {
        const SquareMatrix value = evaluate_term(term, fam);
        out.scale = std::max(out.scale, norm2(value));
        out.rhs = out.rhs + value;
    }
    out.residual_norm = norm2(out.lhs - out.rhs);
    return out;
}

struct CategoryAudit {
    TermCategory category = TermCategory::delta_delta;
    std::size_t actual = 0;
    std::size_t bound = 0;
    bool within = true;
};

struct CountAudit {
    std::array<CategoryAudit, 4> categories{};
    bool dwell_valid = true; ///< bounds are only claimed for dwell-admissible words

    [[nodiscard]] bool all_within() const noexcept {
        return std::all_of(categories.begin(), categories.end(), [](const CategoryAudit& c) { return c.within; });
    }
};

/// Actual per-category term counts against (K1K2, K1K3, (m-K1 delta)K2, (m-K1 delta)K3).
[[nodiscard]] inline CountAudit audit_counts(const Decomposition& dec, std::size_t n, unsigned m, unsigned delta) {
    if (delta == 0 || m < delta || n < 1) {
        throw Error("bad-k-inputs", "need m >= delta >= 1");
    }
    const std::size_t spread = (n - 1) * (m - 1);
    const std::size_t k1 = m / delta;
    const std::size_t k2 = spread / delta;
    const std::size_t k3 = spread - k2 * delta;
    const std::size_t leftover = m - k1 * delta;
    const std::array<std::size_t, 4> bounds{k1 * k2, k1 * k3, leftover * k2, leftover * k3};

    CountAudit audit;
    audit.dwell_valid = validate_dwell(dec.word, delta);
    for (std::size_t c = 0; c < 4; ++c) {
        audit.categories[c] = {kTermCategories[c], dec.counts.by_category[c], bounds[c],
                               dec.counts.by_category[c] <= bounds[c]};
    }
    return audit;
}

} // namespace dwellcert

#endif // DWELLCERT_WORD_HPP
