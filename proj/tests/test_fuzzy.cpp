#include "grayfuzz/fuzzy.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace grayfuzz;

namespace {

double ruspini_error(const FuzzyPartition& p) {
    double worst = 0.0;
    for (int x = 0; x < 256; ++x) {
        double sum = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) sum += p.membership(i, x);
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

FuzzyPartition random_partition(std::mt19937_64& rng, std::size_t regions) {
    std::uniform_real_distribution<double> u(1.0, 254.0);
    std::vector<double> peaks{0.0, 255.0};
    while (peaks.size() < regions) {
        const double v = std::round(u(rng) * 2) / 2;  // half-levels make exact ties likely
        if (std::find(peaks.begin(), peaks.end(), v) == peaks.end()) peaks.push_back(v);
    }
    std::sort(peaks.begin(), peaks.end());
    return FuzzyPartition(peaks);
}

FuzzyOutput curve(std::initializer_list<std::pair<int, double>> samples) {
    FuzzyOutput out;
    for (auto [x, v] : samples) out.samples[x] = v;
    return out;
}

} // namespace

TEST_CASE("membership function shapes") {
    const FuzzyPartition p({0.0, 100.0, 200.0, 255.0});
    CHECK(p.size() == 4);
    CHECK(p.membership(1, 100.0) == 1.0);
    CHECK(p.membership(1, 0.0) == 0.0);
    CHECK(p.membership(1, 200.0) == 0.0);
    CHECK(p.membership(1, 50.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.membership(2, 150.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.membership(0, 0.0) == 1.0);
    CHECK(p.membership(3, 255.0) == 1.0);
    CHECK(p.membership(3, 227.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS(p.membership(4, 10.0), std::out_of_range);

    const auto f = p.region(1);
    CHECK(f.left == 0.0);
    CHECK(f.center == 100.0);
    CHECK(f.right == 200.0);
    CHECK(p.region(0).left_shoulder);
    CHECK(p.region(3).right_shoulder);
}

TEST_CASE("partition validation") {
    CHECK_THROWS_AS(FuzzyPartition({10.0}), std::invalid_argument);
    CHECK_THROWS_AS(FuzzyPartition({10.0, 10.0}), std::invalid_argument);
    CHECK_THROWS_AS(FuzzyPartition({-1.0, 10.0}), std::invalid_argument);
    CHECK_THROWS_AS(FuzzyPartition({20.0, 300.0}), std::invalid_argument);
}

TEST_CASE("best region and active set") {
    const FuzzyPartition p({0.0, 100.0, 200.0, 255.0});
    CHECK(p.best_region(40.0) == 0);
    CHECK(p.best_region(50.0) == 0);  // tie -> lower index
    CHECK(p.best_region(60.0) == 1);
    const auto a = p.active(150.0);
    CHECK(a.count == 2);
    CHECK(a.index[0] == 1);
    CHECK(a.index[1] == 2);
    CHECK(p.active(100.0).count == 1);
    CHECK(p.active(255.0).index[0] == 3);
}

TEST_CASE("build_partition examples") {
    const std::vector<double> one{128.0};
    const auto p = build_partition(one, 3);
    CHECK(p.peaks() == std::vector<double>{0.0, 128.0, 255.0});
    CHECK(p.membership(1, 128.0) == 1.0);

    const std::vector<double> three{100.0, 101.0, 200.0};
    const auto q = build_partition(three, 3);
    CHECK(q.peaks() == std::vector<double>{0.0, 100.5, 200.0, 255.0});

    // gap exactly 8 splits, 7 merges
    const std::vector<double> edge{100.0, 108.0, 115.0};
    CHECK(build_partition(edge, 3).peaks() == std::vector<double>{0.0, 100.0, 111.5, 255.0});

    // raising the region count splits the widest gap at its midpoint
    const auto r = build_partition(one, 5);
    CHECK(r.peaks() == std::vector<double>{0.0, 64.0, 128.0, 191.5, 255.0});

    // anchors at the domain edges collapse into the shoulders
    const std::vector<double> edges{0.0, 255.0};
    CHECK(build_partition(edges, 3).peaks() == std::vector<double>{0.0, 127.5, 255.0});

    CHECK_THROWS_AS(build_partition(std::vector<double>{}, 3), std::invalid_argument);
}

TEST_CASE("Ruspini property for random anchor sets") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    std::uniform_int_distribution<int> count(1, 15);
    std::uniform_int_distribution<int> regions(3, 12);
    for (int k = 0; k < 100; ++k) {
        std::vector<double> anchors(count(rng));
        for (auto& a : anchors) a = std::floor(u(rng));
        const auto p = build_partition(anchors, regions(rng));
        CHECK(ruspini_error(p) < 1e-9);
        CHECK(static_cast<int>(p.size()) >= 3);
    }
}

TEST_CASE("generate_rules examples") {
    const FuzzyPartition in({0.0, 100.0, 200.0, 255.0});
    const FuzzyPartition out({0.0, 128.0, 255.0});
    const std::vector<FuzzyPartition> inputs{in, in};

    const std::vector<TrainingPair> at_peaks{{{100.0, 200.0}, 128.0}};
    const auto r = generate_rules(at_peaks, inputs, out);
    REQUIRE(r.size() == 1);
    CHECK(r[0].antecedent == std::vector<std::size_t>{1, 2});
    CHECK(r[0].consequent == 1);
    CHECK(r[0].degree == 1.0);

    const std::vector<TrainingPair> midway{{{150.0, 100.0}, 255.0}};
    const auto m = generate_rules(midway, inputs, out);
    CHECK(m[0].antecedent == std::vector<std::size_t>{1, 1});
    CHECK(m[0].degree == doctest::Approx(0.5));

    std::vector<TrainingPair> many;
    for (int i = 0; i < 37; ++i) many.push_back({{i * 6.0, 255.0 - i * 6.0}, i * 3.0});
    CHECK(generate_rules(many, inputs, out).size() == 37);

    const std::vector<TrainingPair> bad{{{1.0}, 2.0}};
    CHECK_THROWS_AS(generate_rules(bad, inputs, out), std::invalid_argument);
}

TEST_CASE("combine keeps the strongest rule per antecedent") {
    const FuzzyPartition p({0.0, 128.0, 255.0});
    const std::vector<FuzzyPartition> inputs{p};
    const std::vector<FuzzyRule> rules{{{1}, 0, 0.4}, {{1}, 2, 0.9}, {{0}, 1, 0.3}};
    const auto base = combine(rules, inputs, p);
    CHECK(base.size() == 2);
    CHECK(base.rules().at({1}) == RuleEntry{2, 0.9});
    CHECK(base.rules().at({0}) == RuleEntry{1, 0.3});

    const std::vector<FuzzyRule> tie{{{0}, 2, 0.5}, {{0}, 1, 0.5}};
    CHECK(combine(tie, inputs, p).rules().at({0}).consequent == 1);

    const std::vector<FuzzyRule> wrong_arity{{{0, 1}, 0, 1.0}};
    CHECK_THROWS_AS(combine(wrong_arity, inputs, p), std::invalid_argument);
    const std::vector<FuzzyRule> bad_region{{{7}, 0, 1.0}};
    CHECK_THROWS_AS(combine(bad_region, inputs, p), std::out_of_range);
}

TEST_CASE("combine is order independent") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> region(0, 3);
    std::uniform_int_distribution<int> degree(0, 8);
    const FuzzyPartition p({0.0, 60.0, 190.0, 255.0});
    const std::vector<FuzzyPartition> inputs{p, p};
    for (int k = 0; k < 20; ++k) {
        std::vector<FuzzyRule> rules;
        for (int i = 0; i < 60; ++i) {
            rules.push_back({{region(rng), region(rng)}, region(rng), degree(rng) / 8.0});
        }
        const auto base = combine(rules, inputs, p);
        std::shuffle(rules.begin(), rules.end(), rng);
        CHECK(combine(rules, inputs, p) == base);
    }
}

TEST_CASE("Wang-Mendel matches brute-force enumeration") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<std::size_t> regions(2, 5);
    std::uniform_int_distribution<int> count(1, 200);
    std::uniform_int_distribution<int> level(0, 255);
    for (int k = 0; k < 50; ++k) {
        const std::vector<FuzzyPartition> inputs{random_partition(rng, regions(rng)),
                                                 random_partition(rng, regions(rng))};
        const auto output = random_partition(rng, regions(rng));
        std::vector<TrainingPair> pairs(count(rng));
        for (auto& pr : pairs) {
            // integer levels plus exact peaks and midpoints to exercise ties
            auto pick = [&](const FuzzyPartition& part) {
                const int mode = level(rng) % 4;
                const auto& pk = part.peaks();
                const std::size_t i = static_cast<std::size_t>(level(rng)) % (pk.size() - 1);
                if (mode == 0) return pk[i];
                if (mode == 1) return 0.5 * (pk[i] + pk[i + 1]);
                return static_cast<double>(level(rng));
            };
            pr.inputs = {pick(inputs[0]), pick(inputs[1])};
            pr.output = pick(output);
        }
        const auto base = combine(generate_rules(pairs, inputs, output), inputs, output);
        const auto expected = oracle::wang_mendel(pairs, inputs, output);
        CHECK(base.rules() == expected);
    }
}

TEST_CASE("rule base JSON round trip") {
    const FuzzyPartition p({0.0, 70.5, 180.25, 255.0});
    const std::vector<FuzzyPartition> inputs{p, p};
    const std::vector<FuzzyRule> rules{{{1, 2}, 3, 0.75}, {{0, 0}, 0, 1.0 / 3.0}};
    const auto base = combine(rules, inputs, p);
    const auto text = base.to_json();
    CHECK(text.find("grayfuzz.rulebase/1") != std::string::npos);
    CHECK(RuleBase::from_json(text) == base);
    CHECK_THROWS(RuleBase::from_json(R"({"schema":"other"})"));
}

TEST_CASE("inference examples") {
    const FuzzyPartition in({0.0, 100.0, 200.0, 255.0});
    const FuzzyPartition out({0.0, 80.0, 160.0, 255.0});
    const std::vector<FuzzyPartition> inputs{in, in};

    SUBCASE("singleton rule at its peaks reproduces the consequent envelope") {
        const std::vector<FuzzyRule> rules{{{1, 2}, 2, 1.0}};
        const auto base = combine(rules, inputs, out);
        const std::array<double, 2> x{100.0, 200.0};
        const auto y = infer(base, x);
        for (int v = 0; v < 256; ++v) CHECK(y.samples[v] == out.membership(2, v));
    }

    SUBCASE("no antecedent membership gives an all-zero curve") {
        const std::vector<FuzzyRule> rules{{{1, 1}, 2, 1.0}};
        const auto base = combine(rules, inputs, out);
        const std::array<double, 2> x{250.0, 0.0};
        const auto y = infer(base, x);
        CHECK(y.all_zero());
        const auto crisp = defuzzify(y);
        CHECK(crisp.no_rule_fired);
        CHECK(crisp.level == 0);
    }

    SUBCASE("equal firing strengths aggregate by pointwise max") {
        // Input 150 sits halfway between regions 1 and 2 of the first
        // variable, so both rules fire at 0.5.
        const std::vector<FuzzyRule> rules{{{1, 1}, 1, 1.0}, {{2, 1}, 2, 1.0}};
        const auto base = combine(rules, inputs, out);
        const std::array<double, 2> x{150.0, 100.0};
        const auto y = infer(base, x);
        for (int v = 0; v < 256; ++v) {
            const double want = std::max(std::min(0.5, out.membership(1, v)), std::min(0.5, out.membership(2, v)));
            CHECK(y.samples[v] == doctest::Approx(want).epsilon(1e-15));
        }
    }

    SUBCASE("rule degree scales the firing strength") {
        const std::vector<FuzzyRule> rules{{{1, 2}, 2, 0.25}};
        const auto y = infer(combine(rules, inputs, out), std::array<double, 2>{100.0, 200.0});
        CHECK(*std::max_element(y.samples.begin(), y.samples.end()) == 0.25);
    }

    SUBCASE("errors") {
        const RuleBase empty(inputs, out);
        CHECK_THROWS_AS(infer(empty, std::array<double, 2>{1.0, 2.0}), std::invalid_argument);
        const std::vector<FuzzyRule> rules{{{1, 2}, 2, 1.0}};
        const auto base = combine(rules, inputs, out);
        CHECK_THROWS_AS(infer(base, std::array<double, 1>{1.0}), std::invalid_argument);
    }
}

TEST_CASE("inference matches a scan over every rule") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const std::vector<FuzzyPartition> inputs{random_partition(rng, 5), random_partition(rng, 4)};
        const auto output = random_partition(rng, 4);
        std::vector<FuzzyRule> rules;
        for (std::size_t a = 0; a < 5; ++a) {
            for (std::size_t b = 0; b < 4; ++b) {
                if (d(rng) < 0.7) rules.push_back({{a, b}, static_cast<std::size_t>(rng() % 4), d(rng)});
            }
        }
        if (rules.empty()) continue;
        const auto base = combine(rules, inputs, output);
        for (int s = 0; s < 20; ++s) {
            const std::array<double, 2> x{u(rng), u(rng)};
            FuzzyOutput want;
            for (const auto& [ante, entry] : base.rules()) {
                const double fire = entry.degree * std::min(inputs[0].membership(ante[0], x[0]),
                                                            inputs[1].membership(ante[1], x[1]));
                for (int v = 0; v < 256; ++v) {
                    want.samples[v] = std::max(want.samples[v], std::min(fire, output.membership(entry.consequent, v)));
                }
            }
            CHECK(infer(base, x) == want);
        }
    }
}

TEST_CASE("monotone firing") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    const FuzzyPartition p({0.0, 90.0, 170.0, 255.0});
    const std::vector<FuzzyPartition> inputs{p, p};
    for (int k = 0; k < 50; ++k) {
        std::vector<FuzzyRule> rules{{{1, 1}, 1, 0.3}, {{2, 1}, 2, 0.6}, {{1, 2}, 3, 0.5}, {{2, 2}, 0, 0.2}};
        const std::array<double, 2> x{u(rng), u(rng)};
        const auto before = infer(combine(rules, inputs, p), x);
        rules[k % 4].degree = std::min(1.0, rules[k % 4].degree + 0.3);
        const auto after = infer(combine(rules, inputs, p), x);
        for (int v = 0; v < 256; ++v) CHECK(after.samples[v] >= before.samples[v]);
    }
}

TEST_CASE("inference is independent of rule insertion order") {
    const FuzzyPartition p({0.0, 90.0, 170.0, 255.0});
    const std::vector<FuzzyPartition> inputs{p, p};
    std::vector<FuzzyRule> rules{{{1, 1}, 1, 0.3}, {{2, 1}, 2, 0.6}, {{1, 2}, 3, 0.5}, {{2, 2}, 0, 0.2}};
    const std::array<double, 2> x{130.0, 140.0};
    const auto a = infer(combine(rules, inputs, p), x);
    std::reverse(rules.begin(), rules.end());
    CHECK(infer(combine(rules, inputs, p), x) == a);
}

TEST_CASE("defuzzify examples") {
    CHECK(defuzzify(curve({{77, 1.0}})).level == 77);
    CHECK(defuzzify(curve({{50, 0.4}, {150, 0.4}})).level == 100);
    FuzzyOutput tri;
    for (int v = 0; v < 256; ++v) tri.samples[v] = std::max(0.0, 1.0 - std::abs(v - 128) / 40.0);
    CHECK(defuzzify(tri).level == 128);
    // centroid 100.5 rounds half up
    CHECK(defuzzify(curve({{100, 1.0}, {101, 1.0}})).level == 101);
    CHECK_FALSE(defuzzify(tri).no_rule_fired);
}

TEST_CASE("defuzzified output stays within the consequent supports") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    const FuzzyPartition in({0.0, 90.0, 170.0, 255.0});
    const FuzzyPartition out({0.0, 60.0, 100.0, 140.0, 200.0, 255.0});
    const std::vector<FuzzyPartition> inputs{in, in};
    const std::vector<FuzzyRule> rules{{{1, 1}, 2, 0.8}, {{2, 1}, 3, 0.6}, {{1, 2}, 2, 0.5}, {{2, 2}, 3, 1.0}};
    const auto base = combine(rules, inputs, out);
    for (int k = 0; k < 200; ++k) {
        const auto y = defuzzify(infer(base, std::array<double, 2>{u(rng), u(rng)}));
        if (y.no_rule_fired) continue;
        CHECK(y.level >= 60);
        CHECK(y.level <= 200);
    }
}
