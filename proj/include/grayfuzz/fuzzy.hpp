#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace grayfuzz {

/// Triangular envelope over [0,255]. A shoulder stays at 1 from its center
/// out to the domain edge.
struct MembershipFunction {
    double left = 0.0;
    double center = 0.0;
    double right = 0.0;
    bool left_shoulder = false;
    bool right_shoulder = false;

    double operator()(double x) const;
};

/// Ruspini partition of [0,255]: triangles whose feet sit on the
/// neighbouring peaks, with shoulders at both ends. Memberships sum to 1
/// everywhere.
class FuzzyPartition {
public:
    /// peaks must be strictly increasing, inside [0,255], at least two.
    explicit FuzzyPartition(std::vector<double> peaks);

    std::size_t size() const { return peaks_.size(); }
    const std::vector<double>& peaks() const { return peaks_; }

    MembershipFunction region(std::size_t index) const;

    /// Throws std::out_of_range for a bad index.
    double membership(std::size_t index, double x) const;

    /// Region of maximal membership at x, lowest index on ties.
    std::size_t best_region(double x) const;

    /// Regions with non-zero membership at x (one or two of them).
    struct Active {
        std::array<std::size_t, 2> index{};
        std::array<double, 2> degree{};
        std::size_t count = 0;
    };
    Active active(double x) const;

    friend bool operator==(const FuzzyPartition&, const FuzzyPartition&) = default;

private:
    std::vector<double> peaks_;
};

inline constexpr double kDefaultClusterGap = 8.0;

/// Partition anchored on threshold levels. Sorted anchors closer than
/// cluster_gap to their neighbour are merged (single linkage) and each
/// cluster contributes one peak at its mean. Shoulder peaks sit at 0 and
/// 255. While fewer than min_regions regions exist, the widest gap between
/// peaks is split at its midpoint.
/// Throws std::invalid_argument on empty anchors.
FuzzyPartition build_partition(std::span<const double> anchors, int min_regions,
                               double cluster_gap = kDefaultClusterGap);

/// A data pair: one value per input variable and the desired output.
struct TrainingPair {
    std::vector<double> inputs;
    double output = 0.0;
};

struct FuzzyRule {
    std::vector<std::size_t> antecedent;
    std::size_t consequent = 0;
    double degree = 0.0;

    friend bool operator==(const FuzzyRule&, const FuzzyRule&) = default;
};

/// One rule per pair: every coordinate goes to its best region and the rule
/// degree is the product of those memberships (inputs first, then output).
std::vector<FuzzyRule> generate_rules(std::span<const TrainingPair> pairs,
                                      std::span<const FuzzyPartition> inputs,
                                      const FuzzyPartition& output);

struct RuleEntry {
    std::size_t consequent = 0;
    double degree = 0.0;

    friend bool operator==(const RuleEntry&, const RuleEntry&) = default;
};

class RuleBase {
public:
    using Antecedent = std::vector<std::size_t>;

    RuleBase(std::vector<FuzzyPartition> inputs, FuzzyPartition output);

    /// Keeps at most one rule per antecedent: the larger degree, then the
    /// lower consequent.
    void add(const FuzzyRule& rule);

    const std::vector<FuzzyPartition>& inputs() const { return inputs_; }
    const FuzzyPartition& output() const { return output_; }
    const std::map<Antecedent, RuleEntry>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }
    bool empty() const { return rules_.empty(); }

    /// Consequent envelope sampled at the 256 output levels.
    const std::array<double, 256>& envelope(std::size_t consequent) const { return envelopes_[consequent]; }

    std::string to_json() const;
    static RuleBase from_json(const std::string& text);

    friend bool operator==(const RuleBase& a, const RuleBase& b) {
        return a.inputs_ == b.inputs_ && a.output_ == b.output_ && a.rules_ == b.rules_;
    }

private:
    std::vector<FuzzyPartition> inputs_;
    FuzzyPartition output_;
    std::map<Antecedent, RuleEntry> rules_;
    std::vector<std::array<double, 256>> envelopes_;
};

inline constexpr const char* kRuleBaseSchema = "grayfuzz.rulebase/1";

RuleBase combine(std::span<const FuzzyRule> rules, std::vector<FuzzyPartition> inputs,
                 FuzzyPartition output);

/// Aggregated output membership at the intensity levels 0..255.
struct FuzzyOutput {
    std::array<double, 256> samples{};

    bool all_zero() const;
    friend bool operator==(const FuzzyOutput&, const FuzzyOutput&) = default;
};

/// Mamdani max-min inference. A rule fires with strength
/// degree * min_j mu_j(input_j); its consequent envelope is clipped at that
/// strength and the clipped envelopes are combined by pointwise max.
/// Throws std::invalid_argument on an empty rule base or an input of the
/// wrong arity.
FuzzyOutput infer(const RuleBase& base, std::span<const double> input);

struct CrispOutput {
    int level = 0;
    bool no_rule_fired = false;
};

/// Centroid over the 256 samples, rounded half up. An all-zero curve yields
/// level 0 with no_rule_fired set.
CrispOutput defuzzify(const FuzzyOutput& out);

} // namespace grayfuzz
