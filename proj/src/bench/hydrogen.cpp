#include "bora/bench/hydrogen.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "bora/core/space.hpp"

namespace bora::bench {

namespace {

const std::vector<std::string> kLiquidNames = {
    "AcidRed871", "L-Cysteine", "MethyleneBlue", "NaCl",          "NaOH",
    "PVP",        "RhodamineB", "SDS",           "NaDisilicate"};

// variable order follows the mixture table: five liquids, the solid
// photocatalyst, then the remaining four liquids
constexpr std::size_t kP10Index = 5;

// normalized coordinates: liquids / 5, P10 (x - 1) / 4
std::array<double, 10> normalized(const core::Point& p) {
    std::array<double, 10> u{};
    for (std::size_t i = 0; i < 10; ++i)
        u[i] = i == kP10Index ? (p[i] - 1.0) / 4.0 : p[i] / 5.0;
    return u;
}

// ridge centers (feasible grid mixtures); see synthetic_hydrogen_oracle
const core::Point kRidge1 = {0.0, 2.5, 0.0, 0.0, 1.0, 5.0, 0.0, 0.0, 0.0, 1.0};
const core::Point kRidge2 = {0.0, 1.5, 0.0, 0.5, 0.5, 3.0, 0.0, 0.0, 0.5, 0.0};
constexpr double kAmp1 = 22.0, kAmp2 = 14.0;
constexpr double kTwoWidth1Sq = 0.245;   // 2 * 0.35^2
constexpr double kTwoWidth2Sq = 0.0648;  // 2 * 0.18^2
constexpr double kRuggedAmp = 0.4;

}  // namespace

const core::Point kSyntheticPeakComposition = kRidge1;
const double kSyntheticPeakValue = 22.85412288195262;

core::SearchSpace hydrogen_space() {
    std::vector<core::Variable> vars = {
        {"AcidRed871", core::VarKind::Discrete, 0.0, 5.0, 0.25, "mL", "a dye"},
        {"L-Cysteine", core::VarKind::Discrete, 0.0, 5.0, 0.25, "mL", "hole scavenger"},
        {"MethyleneBlue", core::VarKind::Discrete, 0.0, 5.0, 0.25, "mL", "a dye"},
        {"NaCl", core::VarKind::Discrete, 0.0, 5.0, 0.25, "mL",
         "adjusts ionic strength of the solution"},
        {"NaOH", core::VarKind::Discrete, 0.0, 5.0, 0.25, "mL", "controls pH of the reaction"},
        {"P10-MIX1", core::VarKind::Discrete, 1.0, 5.0, 0.2, "g",
         "a conjugated polymer photocatalyst (solid)"},
        {"PVP", core::VarKind::Discrete, 0.0, 5.0, 0.25, "mL", "a surfactant"},
        {"RhodamineB", core::VarKind::Discrete, 0.0, 5.0, 0.25, "mL", "a dye"},
        {"SDS", core::VarKind::Discrete, 0.0, 5.0, 0.25, "mL", "a surfactant"},
        {"NaDisilicate", core::VarKind::Discrete, 0.0, 5.0, 0.25, "mL",
         "stabilizes the reaction medium"},
    };
    return core::SearchSpace(std::move(vars), {{kLiquidNames, 5.0}});
}

double synthetic_hydrogen_oracle(const core::Point& p) {
    if (p.size() != 10) throw std::invalid_argument("hydrogen oracle: expected 10 inputs");
    const auto u = normalized(p);
    const auto u1 = normalized(kRidge1);
    const auto u2 = normalized(kRidge2);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const double d1 = u[i] - u1[i];
        const double d2 = u[i] - u2[i];
        s1 += d1 * d1;
        s2 += d2 * d2;
    }
    return kAmp1 * std::exp(-s1 / kTwoWidth1Sq) + kAmp2 * std::exp(-s2 / kTwoWidth2Sq) +
           kRuggedAmp * (1.0 + std::cos(6.0 * M_PI * s1));
}

HydrogenOracle table_oracle_from_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("table oracle: cannot open " + path);
    auto space = hydrogen_space();
    std::vector<std::pair<core::Point, double>> table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        table.emplace_back(j.at("x").get<core::Point>(), j.at("y").get<double>());
    }
    if (table.empty()) throw std::runtime_error("table oracle: no rows in " + path);

    std::unordered_map<std::string, double> exact;
    for (const auto& [x, y] : table) exact[core::canonical_key(space, x)] = y;

    return [space = std::move(space), table = std::move(table),
            exact = std::move(exact)](const core::Point& p) {
        const core::Point snapped = snap_to_grid(space, p);
        auto hit = exact.find(core::canonical_key(space, snapped));
        if (hit != exact.end()) return hit->second;
        double best = std::numeric_limits<double>::infinity();
        double value = 0.0;
        for (const auto& [x, y] : table) {
            double dist = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - snapped[i];
                dist += d * d;
            }
            if (dist < best) {
                best = dist;
                value = y;
            }
        }
        return value;
    };
}

namespace {

class HydrogenObjective : public Objective {
public:
    HydrogenObjective(HydrogenOracle oracle, std::optional<double> best)
        : oracle_(std::move(oracle)), best_(best) {
        card_.title = "Hydrogen production";
        card_.description =
            "Maximize the hydrogen evolution rate of a photocatalytic reaction by choosing the "
            "amounts of ten chemicals in a mixture. Nine components are liquids dispensed in "
            "0.25 mL increments; P10-MIX1 is a solid photocatalyst dispensed in 0.2 g "
            "increments. The reaction vial holds at most 5 mL of liquid in total.";
        card_.target_name = "HER";
        card_.target_description = "hydrogen evolution rate in umol/h, to be maximized";
        card_.constraints_text =
            "The total volume of the nine liquid chemicals must not exceed 5 mL.";
        card_.space = hydrogen_space();
    }

    const core::SearchSpace& space() const override { return card_.space; }
    const core::ExperimentCard& card() const override { return card_; }
    double evaluate(const core::Point& p) const override {
        if (!core::contains(card_.space, p))
            throw std::invalid_argument("hydrogen objective: infeasible point");
        return oracle_(p);
    }
    std::optional<double> best_known() const override { return best_; }
    std::string name() const override { return "hydrogen"; }

private:
    HydrogenOracle oracle_;
    std::optional<double> best_;
    core::ExperimentCard card_;
};

}  // namespace

std::unique_ptr<Objective> make_hydrogen(HydrogenOracle oracle, std::optional<double> best_known) {
    return std::make_unique<HydrogenObjective>(std::move(oracle), best_known);
}

}  // namespace bora::bench
