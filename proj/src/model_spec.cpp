#include "ringflow/model_spec.hpp"

#include <nlohmann/json.hpp>

namespace ringflow {

using nlohmann::json;

namespace {

void reject(ModelParse& out, const std::string& where, const std::string& message) {
    out.violations.push_back({Violation::Severity::error, where, message});
}

std::optional<double> number_at(const json& j, const char* key, const std::string& where,
                                ModelParse& out) {
    if (!j.contains(key)) {
        reject(out, where, std::string("missing field '") + key + "'");
        return std::nullopt;
    }
    if (!j.at(key).is_number()) {
        reject(out, where + "." + key, "expected a number");
        return std::nullopt;
    }
    return j.at(key).get<double>();
}

std::optional<Control> parse_control(const json& j, const std::string& where, ModelParse& out) {
    if (!j.is_object()) {
        reject(out, where, "expected an object {alpha, beta}");
        return std::nullopt;
    }
    auto alpha = number_at(j, "alpha", where, out);
    auto beta = number_at(j, "beta", where, out);
    if (!alpha || !beta) return std::nullopt;
    return Control{*alpha, *beta};
}

}  // namespace

ModelParse parse_model(const json& spec) {
    ModelParse out;
    if (!spec.is_object()) {
        reject(out, "$", "model spec must be a JSON object");
        return out;
    }
    const std::string type = spec.value("type", "");
    if (type == "minplus") {
        auto v = number_at(spec, "v", "$", out);
        auto sigma = number_at(spec, "sigma", "$", out);
        if (!v || !sigma) return out;
        MinPlusModel m{*v, *sigma};
        auto checks = validate_model(Model{m});
        out.violations.insert(out.violations.end(), checks.begin(), checks.end());
        if (!has_errors(out.violations)) out.model = m;
        return out;
    }
    if (type == "control") {
        if (!spec.contains("controls") || !spec.at("controls").is_array()) {
            reject(out, "controls", "expected an array of {alpha, beta}");
            return out;
        }
        ControlSet set;
        for (std::size_t u = 0; u < spec.at("controls").size(); ++u) {
            auto c = parse_control(spec.at("controls")[u], "controls[" + std::to_string(u) + "]", out);
            if (c) set.controls.push_back(*c);
        }
        if (has_errors(out.violations)) return out;
        auto checks = validate_control_set(set);
        out.violations.insert(out.violations.end(), checks.begin(), checks.end());
        if (!has_errors(out.violations)) out.model = set;
        return out;
    }
    if (type == "game") {
        if (!spec.contains("rows") || !spec.at("rows").is_array()) {
            reject(out, "rows", "expected an array of {u, options}");
            return out;
        }
        GameControlSet set;
        for (std::size_t r = 0; r < spec.at("rows").size(); ++r) {
            const auto& jrow = spec.at("rows")[r];
            const std::string where = "rows[" + std::to_string(r) + "]";
            if (!jrow.is_object() || !jrow.contains("options") || !jrow.at("options").is_array()) {
                reject(out, where, "expected an object with an 'options' array");
                continue;
            }
            GameRow row;
            row.label = jrow.value("u", "u" + std::to_string(r + 1));
            for (std::size_t w = 0; w < jrow.at("options").size(); ++w) {
                auto c = parse_control(jrow.at("options")[w],
                                       where + ".options[" + std::to_string(w) + "]", out);
                if (c) row.options.push_back(*c);
            }
            set.rows.push_back(std::move(row));
        }
        if (has_errors(out.violations)) return out;
        auto checks = validate_control_set(set);
        out.violations.insert(out.violations.end(), checks.begin(), checks.end());
        if (!has_errors(out.violations)) out.model = set;
        return out;
    }
    reject(out, "type", "unknown model type '" + type + "' (want minplus|control|game)");
    return out;
}

ModelParse parse_model_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        ModelParse out;
        reject(out, "$", "invalid JSON");
        return out;
    }
    return parse_model(j);
}

json model_to_json(const Model& model) {
    return std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MinPlusModel>) {
                return json{{"type", "minplus"}, {"v", m.v}, {"sigma", m.sigma}};
            } else if constexpr (std::is_same_v<T, ControlSet>) {
                json controls = json::array();
                for (const Control& c : m.controls)
                    controls.push_back({{"alpha", c.alpha}, {"beta", c.beta}});
                return json{{"type", "control"}, {"controls", controls}};
            } else {
                json rows = json::array();
                for (const GameRow& row : m.rows) {
                    json options = json::array();
                    for (const Control& c : row.options)
                        options.push_back({{"alpha", c.alpha}, {"beta", c.beta}});
                    rows.push_back({{"u", row.label}, {"options", options}});
                }
                return json{{"type", "game"}, {"rows", rows}};
            }
        },
        model);
}

json violations_to_json(const std::vector<Violation>& violations) {
    json out = json::array();
    for (const Violation& v : violations)
        out.push_back({{"severity", v.is_error() ? "error" : "warning"},
                       {"where", v.where},
                       {"message", v.message}});
    return out;
}

json matrix_to_json(const MinPlusMatrix& A) {
    json rows = json::array();
    for (std::size_t i = 0; i < A.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < A.size(); ++j) {
            const MinPlusScalar s = A.at(i, j);
            if (s.is_eps())
                row.push_back("inf");
            else
                row.push_back(s.v);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

MinPlusMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected a nonempty array of rows");
    MinPlusMatrix A(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& row = j[i];
        if (!row.is_array() || row.size() != j.size())
            throw std::invalid_argument("matrix: rows must form a square grid");
        for (std::size_t k = 0; k < row.size(); ++k) {
            const auto& cell = row[k];
            if (cell.is_string()) {
                if (cell.get<std::string>() != "inf")
                    throw std::invalid_argument("matrix: the only string entry allowed is \"inf\"");
                A.at(i, k) = MinPlusScalar::eps();
            } else if (cell.is_number()) {
                A.at(i, k) = {cell.get<double>()};
            } else {
                throw std::invalid_argument("matrix: entries must be numbers or \"inf\"");
            }
        }
    }
    return A;
}

}  // namespace ringflow
