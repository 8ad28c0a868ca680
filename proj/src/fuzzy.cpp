#include "grayfuzz/fuzzy.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grayfuzz {

double MembershipFunction::operator()(double x) const {
    if (x <= center) {
        if (left_shoulder) return 1.0;
        if (x <= left) return 0.0;
        return (x - left) / (center - left);
    }
    if (right_shoulder) return 1.0;
    if (x >= right) return 0.0;
    return (right - x) / (right - center);
}

FuzzyPartition::FuzzyPartition(std::vector<double> peaks) : peaks_(std::move(peaks)) {
    if (peaks_.size() < 2) {
        throw std::invalid_argument("FuzzyPartition: at least two regions required");
    }
    if (peaks_.front() < 0.0 || peaks_.back() > 255.0) {
        throw std::invalid_argument("FuzzyPartition: peaks outside [0,255]");
    }
    for (std::size_t i = 1; i < peaks_.size(); ++i) {
        if (!(peaks_[i - 1] < peaks_[i])) {
            throw std::invalid_argument("FuzzyPartition: peaks must be strictly increasing");
        }
    }
}

MembershipFunction FuzzyPartition::region(std::size_t index) const {
    if (index >= peaks_.size()) {
        throw std::out_of_range("FuzzyPartition: region index out of range");
    }
    MembershipFunction f;
    f.center = peaks_[index];
    f.left_shoulder = index == 0;
    f.right_shoulder = index + 1 == peaks_.size();
    f.left = f.left_shoulder ? 0.0 : peaks_[index - 1];
    f.right = f.right_shoulder ? 255.0 : peaks_[index + 1];
    return f;
}

double FuzzyPartition::membership(std::size_t index, double x) const {
    return region(index)(x);
}

FuzzyPartition::Active FuzzyPartition::active(double x) const {
    Active a;
    if (x <= peaks_.front()) {
        a.index[0] = 0;
        a.degree[0] = 1.0;
        a.count = 1;
        return a;
    }
    if (x >= peaks_.back()) {
        a.index[0] = peaks_.size() - 1;
        a.degree[0] = 1.0;
        a.count = 1;
        return a;
    }
    // peaks_[lo] < x <= peaks_[lo + 1]
    const auto it = std::lower_bound(peaks_.begin(), peaks_.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - peaks_.begin());
    const std::size_t lo = hi - 1;
    for (std::size_t i : {lo, hi}) {
        const double mu = membership(i, x);
        if (mu > 0.0) {
            a.index[a.count] = i;
            a.degree[a.count] = mu;
            ++a.count;
        }
    }
    return a;
}

std::size_t FuzzyPartition::best_region(double x) const {
    const auto a = active(x);
    if (a.count == 2 && a.degree[1] > a.degree[0]) return a.index[1];
    return a.index[0];
}

FuzzyPartition build_partition(std::span<const double> anchors, int min_regions, double cluster_gap) {
    if (anchors.empty()) {
        throw std::invalid_argument("build_partition: no anchors");
    }
    std::vector<double> sorted(anchors.begin(), anchors.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> peaks{0.0};
    double sum = sorted.front();
    std::size_t members = 1;
    auto flush = [&] {
        const double center = std::clamp(sum / static_cast<double>(members), 0.0, 255.0);
        if (center > peaks.back() && center < 255.0) peaks.push_back(center);
    };
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] - sorted[i - 1] >= cluster_gap) {
            flush();
            sum = 0.0;
            members = 0;
        }
        sum += sorted[i];
        ++members;
    }
    flush();
    peaks.push_back(255.0);

    while (static_cast<int>(peaks.size()) < min_regions) {
        std::size_t widest = 0;
        for (std::size_t i = 1; i + 1 < peaks.size(); ++i) {
            if (peaks[i + 1] - peaks[i] > peaks[widest + 1] - peaks[widest]) widest = i;
        }
        peaks.insert(peaks.begin() + static_cast<std::ptrdiff_t>(widest + 1),
                     0.5 * (peaks[widest] + peaks[widest + 1]));
    }
    return FuzzyPartition(std::move(peaks));
}

std::vector<FuzzyRule> generate_rules(std::span<const TrainingPair> pairs,
                                      std::span<const FuzzyPartition> inputs,
                                      const FuzzyPartition& output) {
    std::vector<FuzzyRule> rules;
    rules.reserve(pairs.size());
    for (const auto& pair : pairs) {
        if (pair.inputs.size() != inputs.size()) {
            throw std::invalid_argument("generate_rules: pair arity does not match the input partitions");
        }
        FuzzyRule rule;
        rule.antecedent.resize(inputs.size());
        double degree = 1.0;
        for (std::size_t j = 0; j < inputs.size(); ++j) {
            const auto r = inputs[j].best_region(pair.inputs[j]);
            rule.antecedent[j] = r;
            degree *= inputs[j].membership(r, pair.inputs[j]);
        }
        rule.consequent = output.best_region(pair.output);
        rule.degree = degree * output.membership(rule.consequent, pair.output);
        rules.push_back(std::move(rule));
    }
    return rules;
}

RuleBase::RuleBase(std::vector<FuzzyPartition> inputs, FuzzyPartition output)
    : inputs_(std::move(inputs)), output_(std::move(output)) {
    if (inputs_.empty()) {
        throw std::invalid_argument("RuleBase: at least one input variable required");
    }
    envelopes_.resize(output_.size());
    for (std::size_t k = 0; k < output_.size(); ++k) {
        const auto f = output_.region(k);
        for (int x = 0; x < 256; ++x) {
            envelopes_[k][x] = f(static_cast<double>(x));
        }
    }
}

void RuleBase::add(const FuzzyRule& rule) {
    if (rule.antecedent.size() != inputs_.size()) {
        throw std::invalid_argument("RuleBase: antecedent arity mismatch");
    }
    for (std::size_t j = 0; j < inputs_.size(); ++j) {
        if (rule.antecedent[j] >= inputs_[j].size()) {
            throw std::out_of_range("RuleBase: antecedent region out of range");
        }
    }
    if (rule.consequent >= output_.size()) {
        throw std::out_of_range("RuleBase: consequent region out of range");
    }
    const RuleEntry entry{rule.consequent, rule.degree};
    auto [it, inserted] = rules_.try_emplace(rule.antecedent, entry);
    if (inserted) return;
    auto& kept = it->second;
    if (entry.degree > kept.degree ||
        (entry.degree == kept.degree && entry.consequent < kept.consequent)) {
        kept = entry;
    }
}

RuleBase combine(std::span<const FuzzyRule> rules, std::vector<FuzzyPartition> inputs,
                 FuzzyPartition output) {
    RuleBase base(std::move(inputs), std::move(output));
    for (const auto& r : rules) {
        base.add(r);
    }
    return base;
}

std::string RuleBase::to_json() const {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["schema"] = kRuleBaseSchema;
    ordered_json ins = ordered_json::array();
    for (const auto& p : inputs_) {
        ins.push_back(ordered_json{{"peaks", p.peaks()}});
    }
    doc["inputs"] = ins;
    doc["output"] = ordered_json{{"peaks", output_.peaks()}};
    ordered_json list = ordered_json::array();
    for (const auto& [antecedent, entry] : rules_) {
        list.push_back(ordered_json{
            {"antecedent", antecedent}, {"consequent", entry.consequent}, {"degree", entry.degree}});
    }
    doc["rules"] = list;
    return doc.dump(2);
}

RuleBase RuleBase::from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    if (doc.value("schema", std::string{}) != kRuleBaseSchema) {
        throw std::invalid_argument("RuleBase::from_json: unsupported schema");
    }
    std::vector<FuzzyPartition> inputs;
    for (const auto& p : doc.at("inputs")) {
        inputs.emplace_back(p.at("peaks").get<std::vector<double>>());
    }
    RuleBase base(std::move(inputs), FuzzyPartition(doc.at("output").at("peaks").get<std::vector<double>>()));
    for (const auto& r : doc.at("rules")) {
        base.add(FuzzyRule{r.at("antecedent").get<std::vector<std::size_t>>(),
                           r.at("consequent").get<std::size_t>(), r.at("degree").get<double>()});
    }
    return base;
}

bool FuzzyOutput::all_zero() const {
    return std::all_of(samples.begin(), samples.end(), [](double v) { return v == 0.0; });
}

FuzzyOutput infer(const RuleBase& base, std::span<const double> input) {
    if (base.empty()) {
        throw std::invalid_argument("infer: empty rule base");
    }
    const auto& partitions = base.inputs();
    if (input.size() != partitions.size()) {
        throw std::invalid_argument("infer: input arity does not match the rule base");
    }

    // Only rules whose every antecedent region is active at the input can
    // fire, so enumerate those combinations instead of scanning all rules.
    std::vector<FuzzyPartition::Active> active;
    active.reserve(input.size());
    for (std::size_t j = 0; j < input.size(); ++j) {
        active.push_back(partitions[j].active(std::clamp(input[j], 0.0, 255.0)));
    }

    FuzzyOutput out;
    RuleBase::Antecedent key(input.size());
    std::vector<std::size_t> pick(input.size(), 0);
    while (true) {
        double strength = 1.0;
        for (std::size_t j = 0; j < input.size(); ++j) {
            key[j] = active[j].index[pick[j]];
            strength = std::min(strength, active[j].degree[pick[j]]);
        }
        if (const auto it = base.rules().find(key); it != base.rules().end()) {
            const double firing = it->second.degree * strength;
            const auto& env = base.envelope(it->second.consequent);
            for (int x = 0; x < 256; ++x) {
                out.samples[x] = std::max(out.samples[x], std::min(firing, env[x]));
            }
        }
        std::size_t j = 0;
        while (j < pick.size() && ++pick[j] == active[j].count) {
            pick[j] = 0;
            ++j;
        }
        if (j == pick.size()) break;
    }
    return out;
}

CrispOutput defuzzify(const FuzzyOutput& out) {
    double mass = 0.0;
    double moment = 0.0;
    for (int x = 0; x < 256; ++x) {
        mass += out.samples[x];
        moment += static_cast<double>(x) * out.samples[x];
    }
    if (mass <= 0.0) {
        return {0, true};
    }
    const double level = std::floor(moment / mass + 0.5);
    return {static_cast<int>(std::clamp(level, 0.0, 255.0)), false};
}

} // namespace grayfuzz
