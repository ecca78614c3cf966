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
#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "dwellcert/certificate.hpp"
#include "dwellcert/reference_example.hpp"
#include "dwellcert/switching.hpp"
#include "oracles.hpp"

using namespace dwellcert;

namespace {

// max over admissible sequences of length <= window of ||W|| e^{lambda |W|}, floored at 1
double basis_c_oracle(const SubsystemFamily& fam, unsigned delta, double lambda, unsigned m) {
    const std::size_t window = fam.size() * (m - 1) + 1;
    double c = 1.0;
    for (const auto& seq : oracle::admissible_sequences(fam.size(), delta, window)) {
        SquareMatrix w = SquareMatrix::identity(fam.dim());
        for (std::size_t idx : seq) {
            w = mat_mul(fam[idx], w);
        }
        c = std::max(c, oracle::spectral_norm(w) * std::exp(lambda * static_cast<double>(seq.size())));
    }
    return c;
}

} // namespace

TEST(GenerateSignal, AlternatesWithoutExtra) {
    const SwitchingSignal sig = generate_signal(2, 3, 20, 1, 0);
    ASSERT_EQ(sig.indices.size(), 20u);
    const std::vector<dwellcert::Run> runs = sig.runs();
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        EXPECT_EQ(runs[i].power, 3u);
        EXPECT_NE(runs[i].index, runs[i + 1].index);
    }
    const std::vector<std::size_t> tau = sig.switching_instants();
    for (std::size_t k = 0; k < tau.size(); ++k) {
        EXPECT_EQ(tau[k], 3 * k);
    }
}

TEST(GenerateSignal, DwellAdmissibleAndDeterministic) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 2 + seed % 4;
        const unsigned delta = 1 + static_cast<unsigned>(seed % 5);
        const SwitchingSignal sig = generate_signal(n, delta, 57, seed);
        EXPECT_EQ(sig.indices.size(), 57u);
        const std::vector<dwellcert::Run> runs = sig.runs();
        EXPECT_TRUE(validate_dwell(std::span<const dwellcert::Run>(runs), delta));
        for (std::size_t idx : sig.indices) {
            EXPECT_LT(idx, n);
        }
        EXPECT_EQ(generate_signal(n, delta, 57, seed).indices, sig.indices);
    }
    EXPECT_THROW((void)generate_signal(1, 1, 5, 0), Error);
    EXPECT_THROW((void)generate_signal(2, 0, 5, 0), Error);
}

TEST(Simulate, ZeroStateStaysZero) {
    const SubsystemFamily fam = reference::nominal_family();
    const std::vector<double> x0{0.0, 0.0};
    const TrajectoryRecord rec = simulate(fam, generate_signal(2, 2, 30, 4), x0, 30);
    ASSERT_EQ(rec.norms.size(), 31u);
    for (double v : rec.norms) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Simulate, ConstantSignalContractsEveryMSteps) {
    const SubsystemFamily fam = reference::nominal_family();
    const ContractionPower cp = find_m(fam, DwellSpec(2), 10);
    SwitchingSignal sig;
    sig.indices.assign(30, 0);
    const std::vector<double> x0{3.0, -4.0};
    const TrajectoryRecord rec = simulate(fam, sig, x0, 30);
    for (std::size_t t = cp.m; t < rec.norms.size(); t += cp.m) {
        EXPECT_LE(rec.norms[t], cp.rho * rec.norms[t - cp.m] * (1 + 1e-12));
    }
}

TEST(Simulate, InputErrors) {
    const SubsystemFamily fam = reference::nominal_family();
    const std::vector<double> bad{1.0};
    const std::vector<double> good{1.0, 1.0};
    EXPECT_THROW((void)simulate(fam, generate_signal(2, 1, 5, 0), bad, 5), Error);
    EXPECT_THROW((void)simulate(fam, generate_signal(2, 1, 5, 0), good, 6), Error);
}

TEST(Enumeration, SmallCounts) {
    EXPECT_EQ(count_admissible_words(2, 1, 2), 6u);
    EXPECT_EQ(count_admissible_words(2, 2, 3), 8u);
    std::size_t visited = 0;
    for_each_admissible_sequence(2, 2, 3, [&](std::span<const std::size_t>) { ++visited; });
    EXPECT_EQ(visited, 8u);
}

TEST(Enumeration, MatchesBruteForceOracles) {
    for (std::size_t n = 2; n <= 3; ++n) {
        for (unsigned delta = 1; delta <= 3; ++delta) {
            const std::size_t max_len = n == 3 && delta == 1 ? 8 : 10;
            const auto want = oracle::admissible_sequences(n, delta, max_len);
            EXPECT_EQ(count_admissible_words(n, delta, max_len), want.size());
            EXPECT_EQ(oracle::count_admissible(n, delta, max_len), want.size());

            std::set<std::vector<std::size_t>> got;
            for_each_admissible_sequence(n, delta, max_len, [&](std::span<const std::size_t> seq) {
                EXPECT_TRUE(got.emplace(seq.begin(), seq.end()).second) << "duplicate sequence";
            });
            EXPECT_EQ(got, std::set<std::vector<std::size_t>>(want.begin(), want.end()))
                << "n " << n << " delta " << delta;
        }
    }
}

TEST(Enumeration, WordsAreLatestLeftmost) {
    const std::vector<std::size_t> seq{0, 0, 1};
    EXPECT_EQ(to_grammar(word_from_sequence(seq)), "2 1^2");
    std::size_t words = 0;
    enumerate_admissible_words(3, 2, 5, [&](const BlockWord& w) {
        EXPECT_TRUE(validate_dwell(BlockWord(std::vector<dwellcert::Run>(w.runs().rbegin(), w.runs().rend())), 2));
        ++words;
    });
    EXPECT_EQ(words, count_admissible_words(3, 2, 5));
}

TEST(Enumeration, GuardRefusesHugeRuns) {
    try {
        for_each_admissible_sequence(3, 1, 30, [](std::span<const std::size_t>) {}, 1000);
        FAIL() << "expected enumeration-too-large";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "enumeration-too-large");
    }
}

TEST(BasisConstant, MatchesBruteForce) {
    const SubsystemFamily fam = reference::nominal_family();
    for (unsigned delta : {1u, 2u, 3u}) {
        const unsigned m = find_m(fam, DwellSpec(delta), 10).m;
        const double want = basis_c_oracle(fam, delta, 0.01, m);
        EXPECT_NEAR(compute_basis_c(fam, delta, 0.01, m), want, 1e-9 * want) << "delta " << delta;
    }
}

TEST(BasisConstant, DegenerateFamilies) {
    EXPECT_EQ(compute_basis_c(SubsystemFamily({SquareMatrix(2), SquareMatrix(2)}), 2, 0.3, 3), 1.0);
    const SubsystemFamily eye({SquareMatrix::identity(2), SquareMatrix::identity(2)});
    EXPECT_DOUBLE_EQ(compute_basis_c(eye, 1, 0.0, 3), 1.0);
}

TEST(BruteForceBound, CertifiedBenchmarkHolds) {
    const SubsystemFamily fam = reference::nominal_family();
    CertifyOptions opts;
    opts.lambda = LambdaMode::fixed_at(0.01);
    const Certificate cert = certify(fam, DwellSpec(2), opts);
    ASSERT_TRUE(cert.certified());
    const double c = compute_basis_c(fam, 2, 0.01, cert.m);
    const GuesBoundReport rep = brute_force_bound_check(fam, 2, 0.01, c, 12);
    EXPECT_TRUE(rep.pass()) << rep.max_violation;
    EXPECT_EQ(rep.words_checked, count_admissible_words(2, 2, 12));
}

TEST(BruteForceBound, ImpossibleRateFails) {
    const SubsystemFamily fam = reference::nominal_family();
    const GuesBoundReport rep = brute_force_bound_check(fam, 2, 10.0, 1.0, 8);
    EXPECT_FALSE(rep.pass());
    EXPECT_GT(rep.max_violation, 0.0);
}

TEST(MonteCarlo, CertifiedEnvelopeHolds) {
    const SubsystemFamily fam = reference::nominal_family();
    const double c = compute_basis_c(fam, 2, 0.01, 3);
    MonteCarloOptions opt;
    opt.trials = 300;
    opt.horizon = 100;
    opt.seed = 42;
    opt.bound = DecayBound{0.01, c};
    const MonteCarloResult res = monte_carlo(fam, 2, opt);
    EXPECT_TRUE(res.summary.bound_checked);
    EXPECT_TRUE(res.summary.bound_pass) << res.summary.worst_slack;
    EXPECT_EQ(res.summary.violations, 0u);
    EXPECT_EQ(res.records.size(), 300u);
    EXPECT_LT(res.summary.max_ratio.back(), res.summary.max_ratio.front());
}

TEST(MonteCarlo, TooTightEnvelopeIsCaught) {
    MonteCarloOptions opt;
    opt.trials = 20;
    opt.horizon = 30;
    opt.bound = DecayBound{2.0, 1.0};
    const MonteCarloResult res = monte_carlo(reference::nominal_family(), 2, opt);
    EXPECT_FALSE(res.summary.bound_pass);
    EXPECT_GT(res.summary.violations, 0u);
}

TEST(MonteCarlo, SeededRunsAreByteIdentical) {
    MonteCarloOptions opt;
    opt.trials = 25;
    opt.horizon = 40;
    opt.seed = 9;
    const auto csv = [&] {
        std::ostringstream os;
        const MonteCarloResult res = monte_carlo(reference::perturbed_family(), 2, opt);
        write_trajectory_csv(os, res.records);
        return os.str();
    };
    const std::string a = csv();
    EXPECT_EQ(a, csv());
    opt.seed = 10;
    EXPECT_NE(a, csv());
}

TEST(MonteCarlo, CsvLayout) {
    MonteCarloOptions opt;
    opt.trials = 2;
    opt.horizon = 3;
    opt.x0 = std::vector<double>{1.0, 0.0};
    const MonteCarloResult res = monte_carlo(reference::nominal_family(), 1, opt);
    std::ostringstream os;
    write_trajectory_csv(os, res.records);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "trial,t,norm");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 2u * 4u);
    EXPECT_EQ(os.str().substr(13, 8), "0,0,1\n0,");
}
