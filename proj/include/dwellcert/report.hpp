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
#ifndef DWELLCERT_REPORT_HPP
#define DWELLCERT_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "certificate.hpp"
#include "error.hpp"
#include "family.hpp"
#include "matrix.hpp"
#include "reference_example.hpp"
#include "switching.hpp"

namespace dwellcert {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Family files
// ---------------------------------------------------------------------------

/**
 * @brief Builds a family from `{"d": 2, "matrices": [[[..],[..]], ...], "labels": [...]}`.
 *
 * Each matrix is a list of d rows of d numbers. Errors are "bad-family-file" naming the
 * offending field path.
 */
[[nodiscard]] inline SubsystemFamily family_from_json(const json& doc) {
    const auto fail = [](const std::string& where, const std::string& what) {
        throw Error("bad-family-file", where + ": " + what);
    };
    if (!doc.is_object()) {
        fail("<root>", "expected an object");
    }
    if (!doc.contains("d") || !doc["d"].is_number_integer() || doc["d"].get<long long>() < 1) {
        fail("d", "expected a positive integer");
    }
    const auto d = static_cast<std::size_t>(doc["d"].get<long long>());
    if (!doc.contains("matrices") || !doc["matrices"].is_array()) {
        fail("matrices", "expected an array of matrices");
    }
    std::vector<SquareMatrix> matrices;
    const json& list = doc["matrices"];
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string where = "matrices[" + std::to_string(k) + "]";
        const json& rows = list[k];
        if (!rows.is_array() || rows.size() != d) {
            fail(where, "expected " + std::to_string(d) + " rows");
        }
        std::vector<double> entries;
        entries.reserve(d * d);
        for (std::size_t r = 0; r < d; ++r) {
            const json& row = rows[r];
            const std::string row_where = where + "[" + std::to_string(r) + "]";
            if (!row.is_array() || row.size() != d) {
                fail(row_where, "expected " + std::to_string(d) + " entries, got " +
                                    (row.is_array() ? std::to_string(row.size()) : std::string("a non-array")));
            }
            for (std::size_t c = 0; c < d; ++c) {
                if (!row[c].is_number()) {
                    fail(row_where + "[" + std::to_string(c) + "]", "expected a number");
                }
                entries.push_back(row[c].get<double>());
            }
        }
        try {
            matrices.emplace_back(d, std::move(entries));
        } catch (const Error& e) {
            fail(where, e.what());
        }
    }
    std::vector<std::string> labels;
    if (doc.contains("labels")) {
        if (!doc["labels"].is_array()) {
            fail("labels", "expected an array of strings");
        }
        for (std::size_t k = 0; k < doc["labels"].size(); ++k) {
            if (!doc["labels"][k].is_string()) {
                fail("labels[" + std::to_string(k) + "]", "expected a string");
            }
            labels.push_back(doc["labels"][k].get<std::string>());
        }
    }
    try {
        return SubsystemFamily(std::move(matrices), std::move(labels));
    } catch (const Error& e) {
        fail("matrices", e.what());
    }
    return {};
}

[[nodiscard]] inline json family_to_json(const SubsystemFamily& fam) {
    json doc;
    doc["d"] = fam.dim();
    doc["matrices"] = json::array();
    for (const SquareMatrix& a : fam.matrices()) {
        json rows = json::array();
        for (std::size_t r = 0; r < a.dim(); ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < a.dim(); ++c) {
                row.push_back(a(r, c));
            }
            rows.push_back(std::move(row));
        }
        doc["matrices"].push_back(std::move(rows));
    }
    if (!fam.labels().empty()) {
        doc["labels"] = fam.labels();
    }
    return doc;
}

/// Parses family JSON text; syntax errors report line and column.
[[nodiscard]] inline SubsystemFamily parse_family(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error("bad-family-file", "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                           ": malformed JSON");
    }
    return family_from_json(doc);
}

[[nodiscard]] inline SubsystemFamily load_family(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("io-error", "cannot read " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_family(buf.str());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

/// Writes to a sibling temp file, then renames over path.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("io-error", "cannot write " + tmp.string());
        }
        out << contents;
        out.flush();
        if (!out) {
            throw Error("io-error", "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("io-error", "cannot move output into " + path.string());
    }
}

inline void save_family(const std::filesystem::path& path, const SubsystemFamily& fam) {
    write_file_atomically(path, family_to_json(fam).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Certificate report
// ---------------------------------------------------------------------------

namespace detail {

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json tagged(double v, const char* formula) { return {{"value", number_or_null(v)}, {"formula", formula}}; }

inline json tagged(unsigned long long v, const char* formula) { return {{"value", v}, {"formula", formula}}; }

} // namespace detail

/**
 * @brief Machine-readable report: inputs echo, tagged certificate scalars, both corollary
 * exponents and both K1 readings with the active choice flagged.
 */
[[nodiscard]] inline json report_document(const Certificate& cert, const SubsystemFamily& fam) {
    using detail::number_or_null;
    using detail::tagged;
    json doc;
    json labels = json::array();
    for (std::size_t i = 0; i < fam.size(); ++i) {
        labels.push_back(fam.name(i));
    }
    doc["inputs"] = {
        {"d", cert.dim},
        {"N", cert.n},
        {"labels", labels},
        {"delta", cert.delta},
        {"m_max", cert.options.m_max},
        {"lambda_mode", cert.options.lambda.fixed ? "fixed" : "maximize"},
        {"lambda_fixed", cert.options.lambda.fixed ? json(*cert.options.lambda.fixed) : json(nullptr)},
        {"exponent_mode", to_string(cert.options.exponent_mode)},
        {"eps_override", cert.eps_overridden},
    };
    json c;
    c["m"] = tagged(static_cast<unsigned long long>(cert.m), "smallest m >= delta with max_i ||A_i^m|| < 1");
    c["rho"] = tagged(cert.rho, "max_i ||A_i^m||");
    c["lambda"] = tagged(cert.lambda, "decay rate, rho e^{lambda m} < 1");
    c["M"] = tagged(cert.big_m, "max_i ||A_i||");
    c["K1"] = tagged(static_cast<unsigned long long>(cert.k.k1), "floor(m/delta)");
    c["K2"] = tagged(static_cast<unsigned long long>(cert.k.k2), "floor((N-1)(m-1)/delta)");
    c["K3"] = tagged(static_cast<unsigned long long>(cert.k.k3), "(N-1)(m-1) - K2 delta");
    c["eps"] = {
        {"delta_delta", tagged(cert.eps.delta_delta, "max_{i!=j} ||A_i^d A_j^d - A_j^d A_i^d||")},
        {"delta_one", tagged(cert.eps.delta_one, "max_{i!=j} ||A_i^d A_j - A_j A_i^d||")},
        {"one_delta", tagged(cert.eps.one_delta, "max_{i!=j} ||A_i A_j^d - A_j^d A_i||")},
        {"one_one", tagged(cert.eps.one_one, "max_{i!=j} ||A_i A_j - A_j A_i||")},
    };
    c["rho_growth"] = tagged(cert.rho_growth, "rho e^{lambda m}");
    c["bracket"] = {
        {"delta_delta", number_or_null(cert.bracket.delta_delta)},
        {"delta_one", number_or_null(cert.bracket.delta_one)},
        {"one_delta", number_or_null(cert.bracket.one_delta)},
        {"one_one", number_or_null(cert.bracket.one_one)},
    };
    c["theorem_lhs"] = tagged(cert.theorem_lhs, "rho e^{lambda m} + bracket e^{lambda (N(m-1)+1)}; certified iff <= 1");
    c["verdict"] = to_string(cert.verdict);
    c["reason"] = cert.reason;
    c["c"] = cert.c ? json(*cert.c) : json(nullptr);
    c["c_formula"] = "max over admissible |W| <= N(m-1)+1 of ||W|| e^{lambda |W|}, floored at 1";
    doc["certificate"] = c;

    const bool printed = cert.options.exponent_mode == ExponentMode::as_printed;
    doc["corollary"] = {
        {"printed",
         {{"value", number_or_null(cert.corollary_lhs_printed)},
          {"formula", "rho e^{lambda m} + m(N-1)(m-1) eps_11 M^{N(m-1)+1} e^{lambda(N(m-1)+1)}"},
          {"active", printed}}},
        {"derived",
         {{"value", number_or_null(cert.corollary_lhs_derived)},
          {"formula", "rho e^{lambda m} + m(N-1)(m-1) eps_11 M^{N(m-1)-1} e^{lambda(N(m-1)+1)}"},
          {"active", !printed}}},
    };
    doc["provenance"] = {
        {"k1_readings",
         {{"floor_m_over_delta", {{"value", cert.k.k1}, {"active", true}}},
          {"floor_delta_over_m", {{"value", cert.k.k1_alt}, {"active", false}}}}},
        {"eps_source", cert.eps_overridden ? "user override" : "max over ordered pairs i != j"},
        {"norm", "induced 2-norm (largest singular value)"},
    };
    return doc;
}

namespace detail {

inline std::string fmt(double v, int precision = 6) {
    if (!std::isfinite(v)) {
        return "n/a";
    }
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

inline void line(std::ostream& os, const std::string& key, const std::string& value, const std::string& note = "") {
    os << "  " << std::left << std::setw(22) << key << std::setw(14) << value;
    if (!note.empty()) {
        os << "  " << note;
    }
    os << '\n';
}

} // namespace detail

/// Human-readable certificate report.
inline void write_report(std::ostream& os, const Certificate& cert, const SubsystemFamily& fam) {
    using detail::fmt;
    using detail::line;
    os << "dwell-time certificate\n";
    line(os, "family", std::to_string(cert.n) + " x (" + std::to_string(cert.dim) + "x" + std::to_string(cert.dim) + ")");
    line(os, "delta", std::to_string(cert.delta), "minimum dwell time");
    if (!cert.schur.empty()) {
        for (std::size_t i = 0; i < cert.schur.size(); ++i) {
            const SchurEvidence& ev = cert.schur[i];
            line(os, "schur " + fam.name(i), ev.contracts ? "yes" : "undetermined",
                 ev.contracts ? "||A^" + std::to_string(ev.power) + "|| = " + fmt(ev.norm) : "");
        }
    }
    line(os, "m", cert.m == 0 ? "n/a" : std::to_string(cert.m), "smallest m >= delta with max ||A_i^m|| < 1");
    line(os, "rho", fmt(cert.rho), "max_i ||A_i^m||");
    line(os, "lambda", fmt(cert.lambda), cert.options.lambda.fixed ? "fixed" : "maximized");
    line(os, "rho e^{lambda m}", fmt(cert.rho_growth), "must be < 1");
    line(os, "M", fmt(cert.big_m), "max_i ||A_i||");
    line(os, "K1", std::to_string(cert.k.k1), "floor(m/delta) [active]; floor(delta/m) = " + std::to_string(cert.k.k1_alt));
    line(os, "K2", std::to_string(cert.k.k2), "floor((N-1)(m-1)/delta)");
    line(os, "K3", std::to_string(cert.k.k3), "(N-1)(m-1) - K2 delta");
    line(os, "eps_{delta,delta}", fmt(cert.eps.delta_delta), cert.eps_overridden ? "override" : "");
    line(os, "eps_{delta,1}", fmt(cert.eps.delta_one));
    line(os, "eps_{1,delta}", fmt(cert.eps.one_delta));
    line(os, "eps_{1,1}", fmt(cert.eps.one_one));
    line(os, "inequality LHS", fmt(cert.theorem_lhs), "certified iff <= 1");
    const bool printed = cert.options.exponent_mode == ExponentMode::as_printed;
    line(os, "delta=1 LHS (printed)", fmt(cert.corollary_lhs_printed),
         std::string("exponent N(m-1)+1") + (printed ? " [active]" : ""));
    line(os, "delta=1 LHS (derived)", fmt(cert.corollary_lhs_derived),
         std::string("exponent N(m-1)-1") + (printed ? "" : " [active]"));
    if (cert.c) {
        line(os, "c", fmt(*cert.c), "basis constant over |W| <= N(m-1)+1");
    }
    line(os, "verdict", to_string(cert.verdict), cert.reason);
}

// ---------------------------------------------------------------------------
// Reference comparison
// ---------------------------------------------------------------------------

struct ComparisonRow {
    std::string name;
    double computed = 0.0;
    double published = 0.0;
    double tolerance = 0.0;
    bool relative = false;
    bool pass = false;
};

struct ReferenceComparison {
    std::string label;
    Certificate cert;
    std::optional<Certificate> arbitrary; ///< same family and lambda at delta = 1, when published
    std::vector<ComparisonRow> rows;

    [[nodiscard]] bool pass() const {
        return cert.certified() && (!arbitrary || !arbitrary->certified()) &&
               std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.pass; });
    }
};

/// Recomputes every published scalar of one reference family at its published delta and lambda.
[[nodiscard]] inline ReferenceComparison compare_with_reference(const std::string& label, const SubsystemFamily& fam,
                                                                const reference::PublishedValues& pub) {
    ReferenceComparison out;
    out.label = label;
    CertifyOptions opts;
    opts.lambda = LambdaMode::fixed_at(pub.lambda);
    out.cert = certify(fam, DwellSpec(pub.delta), opts);
    const Certificate& c = out.cert;

    const auto add = [&](const std::string& name, double computed, double published, double tol, bool relative) {
        const double err = std::abs(computed - published);
        const bool ok = relative ? err <= tol * std::abs(published) : err <= tol;
        out.rows.push_back({name, computed, published, tol, relative, ok});
    };
    const double abs_tol = reference::kValueTolerance;
    const double rel_tol = reference::kLhsRelativeTolerance;
    add("m", c.m, pub.m, 0.0, false);
    add("rho", c.rho, pub.rho, abs_tol, false);
    add("||A1^2||", norm2(mat_pow(fam[0], 2)), pub.a1_sq_norm, abs_tol, false);
    add("||A1^3||", norm2(mat_pow(fam[0], 3)), pub.a1_cube_norm, abs_tol, false);
    add("||A2^2||", norm2(mat_pow(fam[1], 2)), pub.a2_sq_norm, abs_tol, false);
    add("||A2^3||", norm2(mat_pow(fam[1], 3)), pub.a2_cube_norm, abs_tol, false);
    add("rho e^{lambda m}", c.rho_growth, pub.rho_growth, abs_tol, false);
    add("M", c.big_m, pub.big_m, abs_tol, false);
    add("K1", c.k.k1, pub.k1, 0.0, false);
    add("K2", c.k.k2, pub.k2, 0.0, false);
    add("K3", c.k.k3, pub.k3, 0.0, false);
    add("eps_{delta,delta}", c.eps.delta_delta, pub.eps_delta_delta, abs_tol, false);
    add("eps_{delta,1}", c.eps.delta_one, pub.eps_delta_one, abs_tol, false);
    add("eps_{1,delta}", c.eps.one_delta, pub.eps_one_delta, abs_tol, false);
    add("eps_{1,1}", c.eps.one_one, pub.eps_one_one, abs_tol, false);
    add("inequality LHS", c.theorem_lhs, pub.theorem_lhs, rel_tol, true);
    if (pub.corollary_lhs > 0.0) {
        out.arbitrary = certify(fam, DwellSpec(1), opts);
        add("delta=1 LHS (printed)", out.arbitrary->corollary_lhs_printed, pub.corollary_lhs, rel_tol, true);
    }
    return out;
}

inline json comparison_to_json(const ReferenceComparison& cmp) {
    json rows = json::array();
    for (const ComparisonRow& r : cmp.rows) {
        rows.push_back({{"name", r.name},
                        {"computed", detail::number_or_null(r.computed)},
                        {"published", r.published},
                        {"tolerance", r.tolerance},
                        {"relative", r.relative},
                        {"pass", r.pass}});
    }
    return {{"label", cmp.label},
            {"verdict", to_string(cmp.cert.verdict)},
            {"arbitrary_switching_verdict", cmp.arbitrary ? json(to_string(cmp.arbitrary->verdict)) : json(nullptr)},
            {"corollary_lhs_derived",
             cmp.arbitrary ? detail::number_or_null(cmp.arbitrary->corollary_lhs_derived) : json(nullptr)},
            {"rows", rows},
            {"pass", cmp.pass()}};
}

inline void write_comparison(std::ostream& os, const ReferenceComparison& cmp) {
    os << cmp.label << " (verdict: " << to_string(cmp.cert.verdict) << ")\n";
    os << "  " << std::left << std::setw(24) << "quantity" << std::setw(14) << "computed" << std::setw(12)
       << "published" << std::setw(14) << "tolerance" << "status\n";
    for (const ComparisonRow& r : cmp.rows) {
        const std::string tol = r.tolerance == 0.0 ? "exact" : detail::fmt(r.tolerance) + (r.relative ? " rel" : " abs");
        os << "  " << std::left << std::setw(24) << r.name << std::setw(14) << detail::fmt(r.computed, 6)
           << std::setw(12) << detail::fmt(r.published, 6) << std::setw(14) << tol << (r.pass ? "PASS" : "FAIL")
           << '\n';
    }
    if (cmp.arbitrary) {
        os << "  " << std::left << std::setw(24) << "delta=1 LHS (derived)"
           << detail::fmt(cmp.arbitrary->corollary_lhs_derived) << "  (not published)\n";
        os << "  delta=1 verdict: " << to_string(cmp.arbitrary->verdict) << '\n';
    }
}

// ---------------------------------------------------------------------------
// SVG chart
// ---------------------------------------------------------------------------

/// Minimal log-scale line chart of mean and max ||x(t)|| against t.
inline void write_norm_svg(std::ostream& os, const MonteCarloSummary& summary) {
    constexpr double width = 640.0;
    constexpr double height = 400.0;
    constexpr double pad = 50.0;
    constexpr double floor_value = 1e-300;
    const std::size_t n = summary.max_norm.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        for (double v : {summary.mean_norm[t], summary.max_norm[t]}) {
            const double l = std::log10(std::max(v, floor_value));
            lo = std::min(lo, l);
            hi = std::max(hi, l);
        }
    }
    if (!(hi > lo)) {
        hi = lo + 1.0;
    }
    const auto x_of = [&](std::size_t t) {
        return pad + (width - 2 * pad) * (n > 1 ? static_cast<double>(t) / static_cast<double>(n - 1) : 0.0);
    };
    const auto y_of = [&](double v) {
        const double l = std::log10(std::max(v, floor_value));
        return height - pad - (height - 2 * pad) * (l - lo) / (hi - lo);
    };
    const auto polyline = [&](const std::vector<double>& series, const char* color) {
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (std::size_t t = 0; t < n; ++t) {
            os << x_of(t) << ',' << y_of(series[t]) << ' ';
        }
        os << "\"/>\n";
    };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << height - pad << "\" x2=\"" << width - pad << "\" y2=\"" << height - pad
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << height - pad
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">t</text>\n";
    os << "<text x=\"10\" y=\"" << pad - 10 << "\">log10 ||x(t)||: [" << detail::fmt(lo, 3) << ", "
       << detail::fmt(hi, 3) << "]</text>\n";
    polyline(summary.max_norm, "crimson");
    polyline(summary.mean_norm, "steelblue");
    os << "<text x=\"" << width - pad << "\" y=\"" << pad << "\" text-anchor=\"end\" fill=\"crimson\">max</text>\n";
    os << "<text x=\"" << width - pad << "\" y=\"" << pad + 16
       << "\" text-anchor=\"end\" fill=\"steelblue\">mean</text>\n";
    os << "</svg>\n";
}

} // namespace dwellcert

#endif // DWELLCERT_REPORT_HPP
