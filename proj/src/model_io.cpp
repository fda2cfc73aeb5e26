#include "pureg/model_io.hpp"

#include "pureg/errors.hpp"
#include "pureg/fs_util.hpp"

namespace pureg {

namespace {

constexpr const char* kFormatName = "pu-stitched-model";
constexpr int kFormatVersion = 1;

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& v : j) out(i++) = v.get<double>();
  return out;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.push_back(vector_to_json(m.row(r).transpose()));
  }
  return out;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(j.size()), cols);
  Eigen::Index r = 0;
  for (const auto& row : j) {
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw DataError("model file: matrix row has wrong length");
    }
    out.row(r++) = vector_from_json(row).transpose();
  }
  return out;
}

nlohmann::json local_to_json(const LocalModel& local) {
  nlohmann::json j;
  j["kind"] = local.kind == LocalModelKind::Krr ? "krr" : "krr-poly";
  j["sigma"] = local.sigma;
  j["eta"] = local.eta;
  if (local.basis) {
    j["degree"] = local.basis->degree();
    j["basis_shift"] = vector_to_json(local.basis_shift);
  } else {
    j["degree"] = nullptr;
  }
  j["points"] = matrix_to_json(local.training_points);
  j["alpha"] = vector_to_json(local.alpha);
  j["lambda"] = vector_to_json(local.lambda);
  return j;
}

LocalModel local_from_json(const nlohmann::json& j, int dimension) {
  LocalModel local;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "krr") {
    local.kind = LocalModelKind::Krr;
  } else if (kind == "krr-poly") {
    local.kind = LocalModelKind::KrrPoly;
  } else {
    throw DataError("model file: unknown local model kind '" + kind + "'");
  }
  local.sigma = j.at("sigma").get<double>();
  local.eta = j.at("eta").get<double>();
  local.training_points = matrix_from_json(j.at("points"), dimension);
  local.alpha = vector_from_json(j.at("alpha"));
  local.lambda = vector_from_json(j.at("lambda"));
  if (local.alpha.size() != local.training_points.rows()) {
    throw DataError("model file: alpha length does not match kernel centers");
  }
  if (!j.at("degree").is_null()) {
    local.basis = MonomialBasis(dimension, j.at("degree").get<int>());
    if (local.lambda.size() != local.basis->size()) {
      throw DataError("model file: lambda length does not match basis size");
    }
    local.basis_shift = vector_from_json(j.at("basis_shift"));
    if (local.basis_shift.size() != dimension) {
      throw DataError("model file: basis shift has wrong dimension");
    }
  } else if (local.kind == LocalModelKind::KrrPoly) {
    throw DataError("model file: krr-poly local model without a degree");
  }
  return local;
}

}  // namespace

std::string to_string(ModelKind kind) {
  return kind == ModelKind::PuKrr ? "pu-krr" : "pu-krr-poly";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "pu-krr") return ModelKind::PuKrr;
  if (name == "pu-krr-poly") return ModelKind::PuKrrPoly;
  throw DataError("unknown model kind '" + name + "' (expected pu-krr or pu-krr-poly)");
}

nlohmann::json config_to_json(const FitConfig& config) {
  nlohmann::json j;
  j["h"] = config.h;
  j["model"] = to_string(config.model_kind);
  j["degree"] = config.degree;
  if (config.eta) {
    j["eta"] = *config.eta;
  } else {
    j["eta"] = nullptr;
  }
  j["sigma_multiplier"] = config.sigma_multiplier;
  j["eta_grid"] = config.eta_grid;
  j["sigma_multiplier_grid"] = config.sigma_multiplier_grid;
  j["svd_threshold"] = config.svd_threshold;
  j["w0"] = config.w0;
  j["fallback_subsample"] = config.fallback_subsample;
  j["fallback_sigma_multiplier"] = config.fallback_sigma_multiplier;
  j["fallback_eta_scale"] = config.fallback_eta_scale;
  j["seed"] = config.seed;
  j["validation_fraction"] = config.validation_fraction;
  return j;
}

FitConfig config_from_json(const nlohmann::json& j) {
  FitConfig config;
  config.h = j.at("h").get<int>();
  config.model_kind = model_kind_from_string(j.at("model").get<std::string>());
  config.degree = j.at("degree").get<int>();
  if (!j.at("eta").is_null()) config.eta = j.at("eta").get<double>();
  config.sigma_multiplier = j.at("sigma_multiplier").get<double>();
  config.eta_grid = j.at("eta_grid").get<std::vector<double>>();
  config.sigma_multiplier_grid = j.at("sigma_multiplier_grid").get<std::vector<double>>();
  config.svd_threshold = j.at("svd_threshold").get<double>();
  config.w0 = j.at("w0").get<double>();
  config.fallback_subsample = j.at("fallback_subsample").get<int>();
  config.fallback_sigma_multiplier = j.at("fallback_sigma_multiplier").get<double>();
  config.fallback_eta_scale = j.at("fallback_eta_scale").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.validation_fraction = j.at("validation_fraction").get<double>();
  return config;
}

nlohmann::json model_to_json(const StitchedModel& model) {
  nlohmann::json j;
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  j["dimension"] = model.dimension;
  j["w0"] = model.w0;
  j["config"] = config_to_json(model.config);

  nlohmann::json regions = nlohmann::json::array();
  for (const Region& r : model.cover.regions) {
    nlohmann::json rj;
    rj["id"] = r.id;
    rj["center_index"] = r.center_index;
    rj["center"] = vector_to_json(r.center);
    rj["radius"] = r.radius;
    rj["members"] = r.member_indices;
    regions.push_back(std::move(rj));
  }
  j["regions"] = std::move(regions);

  nlohmann::json locals = nlohmann::json::array();
  for (const LocalModel& local : model.locals) locals.push_back(local_to_json(local));
  j["locals"] = std::move(locals);
  j["fallback"] = local_to_json(model.fallback);
  return j;
}

StitchedModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", std::string()) != kFormatName) {
    throw DataError("model file: not a stitched model file");
  }
  if (j.value("version", -1) != kFormatVersion) {
    throw DataError("model file: unsupported version");
  }

  StitchedModel model;
  model.dimension = j.at("dimension").get<int>();
  model.w0 = j.at("w0").get<double>();
  model.config = config_from_json(j.at("config"));

  for (const auto& rj : j.at("regions")) {
    Region r;
    r.id = rj.at("id").get<int>();
    r.center_index = rj.at("center_index").get<int>();
    r.center = vector_from_json(rj.at("center"));
    r.radius = rj.at("radius").get<double>();
    r.member_indices = rj.at("members").get<std::vector<int>>();
    if (r.center.size() != model.dimension) {
      throw DataError("model file: region center has wrong dimension");
    }
    if (r.id != static_cast<int>(model.cover.regions.size())) {
      throw DataError("model file: region ids must be 0, 1, 2, ... in order");
    }
    model.cover.regions.push_back(std::move(r));
  }
  finalize_levels(model.cover);

  for (const auto& lj : j.at("locals")) {
    model.locals.push_back(local_from_json(lj, model.dimension));
  }
  if (model.locals.size() != model.cover.regions.size()) {
    throw DataError("model file: region and local model counts differ");
  }
  model.fallback = local_from_json(j.at("fallback"), model.dimension);
  return model;
}

void save_model(const StitchedModel& model, const std::string& path) {
  atomic_write_file(path, model_to_json(model).dump(2) + "\n");
}

StitchedModel load_model(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": malformed model file: " + e.what());
  }
}

}  // namespace pureg
