#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ringflow/minplus.hpp"
#include "ringflow/models.hpp"

namespace ringflow {

struct ModelParse {
    std::optional<Model> model;      ///< empty when the spec was rejected
    std::vector<Violation> violations;

    bool ok() const { return model.has_value() && !has_errors(violations); }
};

/// Parses {"type":"minplus"|"control"|"game", ...}.  Unknown keys are
/// ignored, so fit output (which carries a residual report) parses back as a
/// plain model.  Rejections are reported, never thrown.
ModelParse parse_model(const nlohmann::json& spec);
ModelParse parse_model_text(const std::string& text);

nlohmann::json model_to_json(const Model& model);
nlohmann::json violations_to_json(const std::vector<Violation>& violations);

/// Dense JSON array form of a min-plus matrix; eps entries are the string "inf".
nlohmann::json matrix_to_json(const MinPlusMatrix& A);
MinPlusMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace ringflow
