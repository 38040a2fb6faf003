#include "adepinn/checkpoint.hpp"

#include <fstream>

#include "adepinn/error.hpp"

namespace adepinn {

namespace {

std::string_view to_string(Combination c) { return c == Combination::learned_head ? "learned_head" : "fixed_average"; }

Combination parse_combination(const std::string& s) {
  if (s == "fixed_average") return Combination::fixed_average;
  if (s == "learned_head") return Combination::learned_head;
  throw Error(ErrorKind::invalid_config, "unknown combination '" + s + "'");
}

}  // namespace

nlohmann::json spec_to_json(const MlpSpec& spec) {
  return {{"input_dim", spec.input_dim},
          {"hidden_sizes", spec.hidden_sizes},
          {"hidden_activation", std::string(to_string(spec.hidden_activation))},
          {"first_layer_activation", std::string(to_string(spec.first_layer_activation))},
          {"output_dim", spec.output_dim}};
}

nlohmann::json spec_to_json(const EnsembleSpec& spec) {
  return {{"subnet", spec_to_json(spec.subnet)},
          {"scale_factors", spec.scale_factors},
          {"combination", std::string(to_string(spec.combination))},
          {"trainable_fourier", spec.trainable_fourier}};
}

MlpSpec mlp_spec_from_json(const nlohmann::json& j) {
  try {
    MlpSpec s;
    s.input_dim = j.at("input_dim").get<int>();
    s.hidden_sizes = j.at("hidden_sizes").get<std::vector<int>>();
    s.hidden_activation = parse_activation(j.at("hidden_activation").get<std::string>());
    s.first_layer_activation = parse_activation(j.at("first_layer_activation").get<std::string>());
    s.output_dim = j.value("output_dim", 1);
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_config, std::string("bad network spec: ") + e.what());
  }
}

EnsembleSpec ensemble_spec_from_json(const nlohmann::json& j) {
  try {
    EnsembleSpec s;
    s.subnet = mlp_spec_from_json(j.at("subnet"));
    s.scale_factors = j.at("scale_factors").get<std::vector<double>>();
    s.combination = parse_combination(j.value("combination", std::string("fixed_average")));
    s.trainable_fourier = j.value("trainable_fourier", true);
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_config, std::string("bad network spec: ") + e.what());
  }
}

nlohmann::json checkpoint_to_json(const ParamStore& params) {
  const Eigen::VectorXd& v = params.flat();
  return {{"format", kCheckpointFormat},
          {"version", kCheckpointVersion},
          {"spec", spec_to_json(params.spec())},
          {"params", std::vector<double>(v.data(), v.data() + v.size())}};
}

ParamStore checkpoint_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kCheckpointFormat || j.at("version").get<int>() != kCheckpointVersion) {
      throw Error(ErrorKind::invalid_config, "unrecognized checkpoint format");
    }
    ParamStore store{NetworkLayout(ensemble_spec_from_json(j.at("spec")))};
    const auto values = j.at("params").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(values.size()) != store.size()) {
      throw Error(ErrorKind::shape_mismatch, "checkpoint has " + std::to_string(values.size()) +
                                                 " parameters, spec needs " + std::to_string(store.size()));
    }
    store.flat() = Eigen::Map<const Eigen::VectorXd>(values.data(), store.size());
    return store;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_config, std::string("bad checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const ParamStore& params) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io_failure, "cannot write " + path.string());
  out << checkpoint_to_json(params).dump() << '\n';
  if (!out) throw Error(ErrorKind::io_failure, "write failed for " + path.string());
}

ParamStore load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_failure, "cannot read " + path.string());
  try {
    return checkpoint_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::io_failure, std::string("cannot parse checkpoint: ") + e.what());
  }
}

}  // namespace adepinn
