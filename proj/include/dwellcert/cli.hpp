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
#ifndef DWELLCERT_CLI_HPP
#define DWELLCERT_CLI_HPP

#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "certificate.hpp"
#include "error.hpp"
#include "family.hpp"
#include "reference_example.hpp"
#include "report.hpp"
#include "switching.hpp"
#include "word.hpp"

namespace dwellcert::cli {

/// Exit codes: 0 certified / pass, 2 not certified / fail, 1 usage or I/O error.
enum ExitCode : int { kOk = 0, kUsageOrIo = 1, kNegative = 2 };

namespace detail {

inline std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw Error("usage", std::string("cannot parse ") + what + " entry '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos) {
            throw Error("usage", std::string("cannot parse ") + what + " entry '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

inline void emit(std::ostream& out, const std::optional<std::string>& path, const std::string& text) {
    if (path) {
        write_file_atomically(*path, text);
    } else {
        out << text;
    }
}

struct CertifyFlags {
    std::string family;
    unsigned delta = 1;
    std::optional<double> lambda;
    bool search_lambda = false;
    unsigned m_max = kDefaultMMax;
    std::string exponent_mode = "printed";
    std::optional<std::string> eps;

    void attach(CLI::App* cmd, bool family_required = true) {
        auto* fam = cmd->add_option("--family", family, "family JSON file");
        if (family_required) {
            fam->required();
        }
        cmd->add_option("--delta", delta, "minimum dwell time (steps)")->required()->check(CLI::PositiveNumber);
        auto* lam = cmd->add_option("--lambda", lambda, "fixed decay rate");
        auto* search = cmd->add_flag("--search-lambda", search_lambda, "maximize lambda (default)");
        lam->excludes(search);
        cmd->add_option("--m-max", m_max, "largest power tried for m")->check(CLI::PositiveNumber);
        cmd->add_option("--exponent-mode", exponent_mode, "delta=1 exponent shown as active")
            ->check(CLI::IsMember({"printed", "derived"}));
        cmd->add_option("--eps", eps, "override eps as 'dd,d1,1d,11'");
    }

    [[nodiscard]] CertifyOptions options() const {
        CertifyOptions opts;
        opts.m_max = m_max;
        opts.lambda = lambda ? LambdaMode::fixed_at(*lambda) : LambdaMode::maximize();
        opts.exponent_mode = exponent_mode == "derived" ? ExponentMode::as_derived : ExponentMode::as_printed;
        if (eps) {
            const std::vector<double> v = parse_list(*eps, "--eps");
            if (v.size() != 4) {
                throw Error("usage", "--eps needs four comma-separated values");
            }
            opts.eps_override = EpsilonTable{v[3], v[2], v[1], v[0]};
        }
        return opts;
    }
};

// Basis constant for a certificate, or nullopt when the enumeration would be too large.
inline std::optional<double> try_basis_c(const SubsystemFamily& fam, const Certificate& cert) {
    if (cert.m == 0 || !std::isfinite(cert.lambda)) {
        return std::nullopt;
    }
    try {
        return compute_basis_c(fam, cert.delta, cert.lambda, cert.m);
    } catch (const Error& e) {
        if (e.code() == "enumeration-too-large") {
            return std::nullopt;
        }
        throw;
    }
}

inline std::string fmt17(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace detail

/**
 * @brief Entry point shared by the dwellcert binary and the tests.
 *
 * Subcommands: analyze, simulate, decompose, enumerate, reproduce-example.
 */
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dwell-time stability certificates for discrete-time switched linear systems", "dwellcert"};
    app.require_subcommand(1);

    // analyze
    detail::CertifyFlags analyze_flags;
    bool analyze_json = false;
    std::optional<std::string> analyze_out;
    auto* analyze = app.add_subcommand("analyze", "compute the certificate for one family and delta");
    analyze_flags.attach(analyze);
    analyze->add_flag("--json", analyze_json, "emit the JSON report");
    analyze->add_option("--out", analyze_out, "write the report to a file");

    // simulate
    detail::CertifyFlags sim_flags;
    MonteCarloOptions mc;
    std::optional<double> sim_c;
    std::optional<std::string> sim_x0;
    std::optional<std::string> sim_out;
    std::optional<std::string> sim_svg;
    bool sim_json = false;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo trajectories under random dwell-delta signals");
    sim_flags.attach(simulate_cmd);
    simulate_cmd->add_option("--trials", mc.trials, "number of trials")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--horizon", mc.horizon, "steps per trial");
    simulate_cmd->add_option("--seed", mc.seed, "base RNG seed");
    simulate_cmd->add_option("--max-extra", mc.max_extra, "run lengths drawn from delta..delta+max-extra");
    simulate_cmd->add_option("--x0-box", mc.x0_box, "x0 uniform on [-b, b]^d");
    simulate_cmd->add_option("--x0", sim_x0, "fixed initial state 'x1,x2,...'");
    simulate_cmd->add_option("--c", sim_c, "basis constant (skips enumeration)");
    simulate_cmd->add_option("--out", sim_out, "trajectory CSV path (default stdout)");
    simulate_cmd->add_option("--svg", sim_svg, "write a mean/max norm chart");
    simulate_cmd->add_flag("--json", sim_json, "emit the summary as JSON");

    // decompose
    std::string word_text;
    std::optional<std::size_t> dec_target;
    std::optional<unsigned> dec_m;
    unsigned dec_delta = 1;
    std::optional<std::string> dec_family;
    unsigned dec_m_max = kDefaultMMax;
    auto* decompose_cmd = app.add_subcommand("decompose", "rewrite a word as A_target^m L1 plus commutator terms");
    decompose_cmd->add_option("--word", word_text, "word, e.g. '3^2 2^2 1^3' (1-based)")->required();
    decompose_cmd->add_option("--target", dec_target, "subsystem to pull to the front (1-based)");
    decompose_cmd->add_option("--m", dec_m, "number of target letters to move");
    decompose_cmd->add_option("--delta", dec_delta, "minimum dwell time")->required()->check(CLI::PositiveNumber);
    decompose_cmd->add_option("--family", dec_family, "family JSON for the numeric check");
    decompose_cmd->add_option("--m-max", dec_m_max, "largest power tried when --m is omitted");

    // enumerate
    detail::CertifyFlags enum_flags;
    std::size_t max_len = 12;
    std::optional<double> enum_c;
    auto* enumerate_cmd = app.add_subcommand("enumerate", "check ||W|| <= c e^{-lambda |W|} on every admissible word");
    enum_flags.attach(enumerate_cmd);
    enumerate_cmd->add_option("--max-len", max_len, "longest word checked");
    enumerate_cmd->add_option("--c", enum_c, "basis constant (default: computed)");

    // reproduce-example
    bool repro_json = false;
    auto* reproduce = app.add_subcommand("reproduce-example", "recompute the two-mode benchmark and compare");
    reproduce->add_flag("--json", repro_json, "machine-readable comparison");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageOrIo;
    }

    try {
        if (analyze->parsed()) {
            const SubsystemFamily fam = load_family(analyze_flags.family);
            Certificate cert = certify(fam, DwellSpec(analyze_flags.delta), analyze_flags.options());
            if (cert.certified()) {
                cert.c = detail::try_basis_c(fam, cert);
            }
            std::ostringstream text;
            if (analyze_json) {
                text << report_document(cert, fam).dump(2) << '\n';
            } else {
                write_report(text, cert, fam);
            }
            detail::emit(out, analyze_out, text.str());
            return cert.certified() ? kOk : kNegative;
        }

        if (simulate_cmd->parsed()) {
            const SubsystemFamily fam = load_family(sim_flags.family);
            if (sim_x0) {
                mc.x0 = detail::parse_list(*sim_x0, "--x0");
            }
            std::string bound_note;
            if (sim_flags.lambda && sim_c) {
                mc.bound = DecayBound{*sim_flags.lambda, *sim_c};
                bound_note = "user-supplied";
            } else {
                Certificate cert = certify(fam, DwellSpec(sim_flags.delta), sim_flags.options());
                if (cert.certified()) {
                    const std::optional<double> c = sim_c ? sim_c : detail::try_basis_c(fam, cert);
                    if (c) {
                        mc.bound = DecayBound{cert.lambda, *c};
                        bound_note = "certified";
                    }
                }
                if (!mc.bound) {
                    bound_note = "none (" + (cert.reason.empty() ? std::string("basis enumeration too large")
                                                                   : cert.reason) + ")";
                }
            }
            const MonteCarloResult result = monte_carlo(fam, sim_flags.delta, mc);

            std::ostringstream csv;
            write_trajectory_csv(csv, result.records);
            std::ostream& summary_stream = sim_out ? out : err;
            if (sim_out) {
                write_file_atomically(*sim_out, csv.str());
            } else {
                out << csv.str();
            }
            if (sim_svg) {
                std::ostringstream svg;
                write_norm_svg(svg, result.summary);
                write_file_atomically(*sim_svg, svg.str());
            }
            const MonteCarloSummary& s = result.summary;
            const bool ok = s.bound_checked && s.bound_pass;
            if (sim_json) {
                json j{{"trials", mc.trials},
                       {"horizon", mc.horizon},
                       {"seed", mc.seed},
                       {"bound", bound_note},
                       {"lambda", mc.bound ? json(mc.bound->lambda) : json(nullptr)},
                       {"c", mc.bound ? json(mc.bound->c) : json(nullptr)},
                       {"bound_checked", s.bound_checked},
                       {"bound_pass", s.bound_pass},
                       {"violations", s.violations},
                       {"final_max_ratio", s.max_ratio.back()}};
                summary_stream << j.dump(2) << '\n';
            } else {
                summary_stream << "trials " << mc.trials << ", horizon " << mc.horizon << ", seed " << mc.seed << '\n';
                summary_stream << "bound: " << bound_note;
                if (mc.bound) {
                    summary_stream << " (lambda = " << detail::fmt17(mc.bound->lambda)
                                   << ", c = " << detail::fmt17(mc.bound->c) << ")";
                }
                summary_stream << '\n';
                summary_stream << "max ||x(T)||/||x0|| = " << detail::fmt17(s.max_ratio.back()) << '\n';
                summary_stream << "bound " << (ok ? "PASS" : s.bound_checked ? "FAIL" : "UNCHECKED") << " ("
                               << s.violations << " violations)\n";
            }
            return ok ? kOk : kNegative;
        }

        if (decompose_cmd->parsed()) {
            const BlockWord word = parse_word(word_text);
            std::optional<SubsystemFamily> fam;
            if (dec_family) {
                fam = load_family(*dec_family);
            }
            unsigned m = 0;
            if (dec_m) {
                m = *dec_m;
            } else if (fam) {
                m = find_m(*fam, DwellSpec(dec_delta), dec_m_max).m;
            } else {
                throw Error("usage", "--m is required without --family");
            }
            if (m < dec_delta) {
                throw Error("usage", "--m must be at least --delta");
            }
            std::size_t target = 0;
            if (dec_target) {
                if (*dec_target == 0) {
                    throw Error("usage", "--target is 1-based");
                }
                target = *dec_target - 1;
            } else {
                target = choose_target(word, m);
            }
            std::size_t n = 0;
            for (const Run& r : word.runs()) {
                n = std::max(n, r.index + 1);
            }
            if (fam) {
                n = fam->size();
            }
            const Decomposition dec = decompose(word, target, m, dec_delta);
            out << "word   " << format_word(word) << "   (target A" << target + 1 << ", m = " << m
                << ", delta = " << dec_delta << ", dwell " << (validate_dwell(word, dec_delta) ? "ok" : "violated")
                << ")\n";
            out << "terms  " << dec.terms.size() << '\n';
            for (std::size_t i = 0; i < dec.terms.size(); ++i) {
                const DecompositionTerm& t = dec.terms[i];
                out << "  " << std::setw(3) << i << "  " << std::left << std::setw(40) << format_term(t) << std::right;
                if (t.category) {
                    out << " [" << to_string(*t.category) << ']';
                }
                out << '\n';
            }
            const CountAudit audit = audit_counts(dec, std::max<std::size_t>(n, 1), m, dec_delta);
            out << "counts (N = " << n << ")" << (audit.dwell_valid ? "" : "  bounds not claimed: word violates dwell")
                << '\n';
            for (const CategoryAudit& c : audit.categories) {
                out << "  " << std::left << std::setw(12) << to_string(c.category) << std::right << " actual "
                    << c.actual << "  bound " << c.bound << "  " << (c.within ? "within" : "EXCEEDS") << '\n';
            }
            bool ok = true;
            if (fam) {
                const DecompositionCheck check = evaluate_decomposition(dec, *fam);
                ok = check.residual_norm <= 1e-9 * std::max(check.scale, 1.0);
                out << "residual ||lhs - rhs|| = " << detail::fmt17(check.residual_norm) << "  (scale "
                    << detail::fmt17(check.scale) << ") " << (ok ? "PASS" : "FAIL") << '\n';
            }
            return ok ? kOk : kNegative;
        }

        if (enumerate_cmd->parsed()) {
            const SubsystemFamily fam = load_family(enum_flags.family);
            const DwellSpec delta(enum_flags.delta);
            double lambda = 0.0;
            unsigned m = 0;
            if (enum_flags.lambda) {
                lambda = *enum_flags.lambda;
                m = find_m(fam, delta, enum_flags.m_max).m;
            } else {
                const Certificate cert = certify(fam, delta, enum_flags.options());
                if (!cert.certified()) {
                    throw Error("not-certified", "no certified lambda (" + cert.reason + "); pass --lambda");
                }
                lambda = cert.lambda;
                m = cert.m;
            }
            const double c = enum_c ? *enum_c : compute_basis_c(fam, delta.value(), lambda, m);
            const GuesBoundReport rep = brute_force_bound_check(fam, delta.value(), lambda, c, max_len);
            out << "lambda          " << detail::fmt17(lambda) << '\n';
            out << "c               " << detail::fmt17(c) << (enum_c ? "  (user)" : "  (basis, |W| <= N(m-1)+1)")
                << '\n';
            out << "max length      " << max_len << '\n';
            out << "words checked   " << rep.words_checked << '\n';
            out << "max violation   " << detail::fmt17(rep.max_violation) << "  (at |W| = " << rep.worst_length
                << ")\n";
            out << "result          " << (rep.pass() ? "PASS" : "FAIL") << '\n';
            return rep.pass() ? kOk : kNegative;
        }

        if (reproduce->parsed()) {
            const ReferenceComparison nominal =
                compare_with_reference("nominal family", reference::nominal_family(), reference::kNominal);
            const ReferenceComparison perturbed =
                compare_with_reference("perturbed family", reference::perturbed_family(), reference::kPerturbed);
            const bool ok = nominal.pass() && perturbed.pass();
            if (repro_json) {
                out << json{{"families", {comparison_to_json(nominal), comparison_to_json(perturbed)}}, {"pass", ok}}
                           .dump(2)
                    << '\n';
            } else {
                write_comparison(out, nominal);
                out << '\n';
                write_comparison(out, perturbed);
                out << '\n' << (ok ? "all values reproduced" : "MISMATCH") << '\n';
            }
            return ok ? kOk : kNegative;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == "not-certified" ? kNegative : kUsageOrIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsageOrIo;
    }
    return kUsageOrIo;
}

} // namespace dwellcert::cli

#endif // DWELLCERT_CLI_HPP
