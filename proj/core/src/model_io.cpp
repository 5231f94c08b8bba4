#include "tsdantzig/model_io.hpp"

#include <cmath>

#include "json.hpp"
#include "tsdantzig/error.hpp"

namespace tsdantzig {

using nlohmann::json;

std::string model_to_json(const LinearProcessModel& model, int indent) {
  json doc;
  doc["p"] = model.p;
  doc["truncation"] = model.truncation();
  doc["beta"] = std::isinf(model.beta) ? json("inf") : json(model.beta);
  doc["c0"] = model.c0;
  doc["sparsify_frac"] = model.sparsify_frac;
  doc["innovation"] = std::string(to_string(model.innovation));
  doc["seed"] = model.seed;
  doc["mean"] = model.mean;
  json coefficients = json::array();
  for (const DenseMatrix& a : model.coefficients) {
    coefficients.push_back(std::vector<double>(a.entries().begin(), a.entries().end()));
  }
  doc["coefficients"] = std::move(coefficients);
  return doc.dump(indent);
}

LinearProcessModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("model JSON: ") + e.what());
  }
  try {
    LinearProcessModel model;
    model.p = doc.at("p").get<std::size_t>();
    const json& beta = doc.at("beta");
    if (beta.is_string()) {
      if (beta.get<std::string>() != "inf") throw InvalidArgument("model JSON: beta must be a number or \"inf\"");
      model.beta = std::numeric_limits<double>::infinity();
    } else {
      model.beta = beta.get<double>();
    }
    model.c0 = doc.at("c0").get<double>();
    model.sparsify_frac = doc.value("sparsify_frac", 0.0);
    model.innovation = parse_innovation(doc.at("innovation").get<std::string>());
    model.seed = doc.value("seed", std::uint64_t{0});
    model.mean = doc.at("mean").get<Vector>();
    const std::size_t truncation = doc.at("truncation").get<std::size_t>();
    const json& coefficients = doc.at("coefficients");
    if (coefficients.size() != truncation + 1)
      throw InvalidArgument("model JSON: coefficient count differs from truncation + 1");
    for (const json& entry : coefficients) {
      model.coefficients.emplace_back(model.p, model.p, entry.get<std::vector<double>>());
    }
    model.validate();
    return model;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("model JSON: ") + e.what());
  }
}

}  // namespace tsdantzig
