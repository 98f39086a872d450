#include "bora/core/card.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bora::core {

using nlohmann::ordered_json;

void ExperimentCard::validate() const {
    if (title.empty()) throw CardError("experiment card: title is required");
    if (description.empty()) throw CardError("experiment card: description is required");
    if (target_name.empty()) throw CardError("experiment card: target name is required");
    if (space.dimension() == 0) throw CardError("experiment card: variables are required");
}

std::string ExperimentCard::to_json() const {
    ordered_json j;
    j["title"] = title;
    j["description"] = description;
    j["target"] = {{"name", target_name}, {"description", target_description}};
    j["variables"] = ordered_json::array();
    for (const auto& v : space.variables()) {
        ordered_json jv;
        jv["name"] = v.name;
        jv["kind"] = v.kind == VarKind::Discrete ? "discrete" : "continuous";
        jv["lower"] = v.lower;
        jv["upper"] = v.upper;
        if (v.kind == VarKind::Discrete) jv["step"] = v.step;
        jv["unit"] = v.unit;
        jv["description"] = v.description;
        j["variables"].push_back(std::move(jv));
    }
    j["constraints"] = ordered_json::array();
    for (const auto& c : space.constraints())
        j["constraints"].push_back({{"variables", c.variable_names}, {"bound", c.bound}});
    j["context"] = context;
    return j.dump(2);
}

ExperimentCard ExperimentCard::from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw CardError(std::string("experiment card: invalid JSON: ") + e.what());
    }
    ExperimentCard card;
    try {
        card.title = j.at("title").get<std::string>();
        card.description = j.at("description").get<std::string>();
        card.target_name = j.at("target").at("name").get<std::string>();
        card.target_description = j.at("target").value("description", std::string{});
        card.context = j.value("context", std::string{});

        std::vector<Variable> vars;
        for (const auto& jv : j.at("variables")) {
            Variable v;
            v.name = jv.at("name").get<std::string>();
            v.kind = jv.at("kind").get<std::string>() == "discrete" ? VarKind::Discrete
                                                                    : VarKind::Continuous;
            v.lower = jv.at("lower").get<double>();
            v.upper = jv.at("upper").get<double>();
            if (v.kind == VarKind::Discrete) v.step = jv.at("step").get<double>();
            v.unit = jv.value("unit", std::string{});
            v.description = jv.value("description", std::string{});
            vars.push_back(std::move(v));
        }
        std::vector<SumConstraint> cons;
        if (j.contains("constraints"))
            for (const auto& jc : j.at("constraints"))
                cons.push_back({jc.at("variables").get<std::vector<std::string>>(),
                                jc.at("bound").get<double>()});
        card.space = SearchSpace(std::move(vars), std::move(cons));
    } catch (const CardError&) {
        throw;
    } catch (const std::exception& e) {
        throw CardError(std::string("experiment card: ") + e.what());
    }
    card.validate();
    return card;
}

ExperimentCard ExperimentCard::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CardError("experiment card: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void ExperimentCard::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw CardError("experiment card: cannot write " + path);
    out << to_json() << '\n';
}

}  // namespace bora::core
