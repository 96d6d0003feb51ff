#include "semcomp/config.hpp"

#include "semcomp/errors.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace semcomp {

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::rq1: return "rq1";
    case Experiment::rq2: return "rq2";
    case Experiment::rq3: return "rq3";
    case Experiment::synth: return "synth";
  }
  return "?";
}

Experiment parse_experiment(std::string_view text) {
  for (auto e : {Experiment::rq1, Experiment::rq2, Experiment::rq3, Experiment::synth}) {
    if (text == to_string(e)) return e;
  }
  throw InputError("unknown experiment '" + std::string(text) + "'");
}

namespace {

template <typename T>
T get(const YAML::Node& node, const char* key, T fallback) {
  const auto v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("config key '") + key + "': " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

ExperimentConfig parse_config(const std::string& yaml_text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("config parse error: ") + e.what());
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw InputError("config root must be a mapping");

  ExperimentConfig cfg;
  cfg.seed = get<std::uint64_t>(root, "seed", cfg.seed);
  cfg.jobs = get<std::size_t>(root, "jobs", cfg.jobs);
  if (root["output_dir"]) cfg.output_dir = resolve(base_dir, root["output_dir"].as<std::string>());
  else cfg.output_dir = resolve(base_dir, cfg.output_dir.string());

  if (const auto ex = root["experiments"]) {
    if (!ex.IsSequence()) throw InputError("'experiments' must be a list");
    cfg.experiments.clear();
    for (const auto& e : ex) cfg.experiments.insert(parse_experiment(e.as<std::string>()));
  }

  if (const auto models = root["models"]) {
    for (const auto& m : models) {
      ModelSpec spec;
      spec.id = get<std::string>(m, "id", "");
      if (spec.id.empty()) throw InputError("every model needs an 'id'");
      const auto path = get<std::string>(m, "path", "");
      if (path.empty()) throw InputError("model '" + spec.id + "' needs a 'path'");
      spec.path = resolve(base_dir, path);
      spec.family = get<std::string>(m, "family", spec.id);
      spec.parameters = get<double>(m, "parameters", 0.0);
      spec.unit_normalize = get<bool>(m, "unit_normalize", false);
      cfg.models.push_back(std::move(spec));
    }
  }

  if (const auto datasets = root["datasets"]) {
    for (const auto& d : datasets) {
      DatasetSpec spec;
      spec.name = get<std::string>(d, "name", "");
      if (spec.name.empty()) throw InputError("every dataset needs a 'name'");
      const auto path = get<std::string>(d, "path", "");
      if (path.empty()) throw InputError("dataset '" + spec.name + "' needs a 'path'");
      spec.path = resolve(base_dir, path);
      if (d["source"]) spec.source = parse_source(d["source"].as<std::string>());
      if (d["orientation"]) spec.orientation = parse_orientation(d["orientation"].as<std::string>());
      if (d["skip_list"]) spec.skip_list = resolve(base_dir, d["skip_list"].as<std::string>());
      cfg.datasets.push_back(std::move(spec));
    }
  }

  if (const auto km = root["kmeans"]) {
    cfg.kmeans.restarts = get<std::size_t>(km, "restarts", cfg.kmeans.restarts);
    cfg.kmeans.max_iterations = get<std::size_t>(km, "max_iterations", cfg.kmeans.max_iterations);
    cfg.kmeans.tolerance = get<double>(km, "tolerance", cfg.kmeans.tolerance);
    if (km["init"]) cfg.kmeans.init = parse_kmeans_init(km["init"].as<std::string>());
  }

  if (const auto t = root["tradeoff"]) {
    cfg.tradeoff.beta = get<double>(t, "beta", cfg.tradeoff.beta);
    cfg.tradeoff.alpha = get<double>(t, "alpha", cfg.tradeoff.alpha);
    if (const auto bw = t["bandwidth"]) {
      const auto text = bw.as<std::string>();
      if (text == "median" || text == "median_heuristic") {
        cfg.tradeoff.bandwidth = BandwidthRule::median();
      } else {
        cfg.tradeoff.bandwidth = BandwidthRule::fixed_value(bw.as<double>());
      }
    }
    if (t["k_sweep"]) cfg.tradeoff.k_sweep = t["k_sweep"].as<std::vector<std::size_t>>();
  }

  if (const auto a = root["rq1"]) {
    cfg.alignment.baseline_repetitions =
        get<std::size_t>(a, "baseline_repetitions", cfg.alignment.baseline_repetitions);
    cfg.alignment.coverage_floor = get<double>(a, "coverage_floor", cfg.alignment.coverage_floor);
  }

  if (const auto r = root["rq2"]) {
    if (const auto modes = r["modes"]) {
      cfg.typicality.modes.clear();
      for (const auto& m : modes) cfg.typicality.modes.push_back(parse_similarity_mode(m.as<std::string>()));
    }
    cfg.typicality.per_category = get<bool>(r, "per_category", cfg.typicality.per_category);
  }

  if (const auto s = root["synth"]) {
    auto& mx = cfg.synth.mixture;
    mx.components = get<std::size_t>(s, "components", mx.components);
    mx.points_per_component = get<std::size_t>(s, "points_per_component", mx.points_per_component);
    mx.dim = get<std::size_t>(s, "dim", mx.dim);
    mx.separation = get<double>(s, "separation", mx.separation);
    mx.component_std = get<double>(s, "component_std", mx.component_std);
    mx.typicality_gradient = get<bool>(s, "typicality_gradient", mx.typicality_gradient);
    if (s["seed"]) mx.seed = s["seed"].as<std::uint64_t>();
    cfg.synth.perturb_fraction = get<double>(s, "perturb_fraction", cfg.synth.perturb_fraction);
    cfg.synth.model_id = get<std::string>(s, "model_id", cfg.synth.model_id);
    cfg.synth.family = get<std::string>(s, "family", cfg.synth.family);
    cfg.synth.parameters = get<double>(s, "parameters", cfg.synth.parameters);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  return parse_config(ss.str(), base);
}

void ExperimentConfig::validate() const {
  if (jobs == 0) throw InputError("jobs must be >= 1");
  tradeoff.validate();
  if (kmeans.restarts == 0) throw InputError("kmeans.restarts must be >= 1");
  if (alignment.baseline_repetitions == 0) throw InputError("rq1.baseline_repetitions must be >= 1");
  if (!(alignment.coverage_floor >= 0.0 && alignment.coverage_floor <= 1.0)) {
    throw InputError("rq1.coverage_floor must be in [0, 1]");
  }
  if (!(synth.perturb_fraction >= 0.0 && synth.perturb_fraction <= 1.0)) {
    throw InputError("synth.perturb_fraction must be in [0, 1]");
  }
  if (experiments.contains(Experiment::synth)) synth.mixture.validate();
  const bool needs_inputs = experiments.contains(Experiment::rq1) ||
                            experiments.contains(Experiment::rq2) ||
                            experiments.contains(Experiment::rq3);
  if (needs_inputs && !experiments.contains(Experiment::synth) &&
      (models.empty() || datasets.empty())) {
    throw InputError("selected experiments need at least one model and one dataset");
  }
}

std::string ExperimentConfig::canonical_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  auto& ex = j["experiments"] = nlohmann::ordered_json::array();
  for (auto e : experiments) ex.push_back(to_string(e));
  auto& ms = j["models"] = nlohmann::ordered_json::array();
  for (const auto& m : models) {
    ms.push_back({{"id", m.id}, {"path", m.path.generic_string()}, {"family", m.family},
                  {"parameters", m.parameters}, {"unit_normalize", m.unit_normalize}});
  }
  auto& ds = j["datasets"] = nlohmann::ordered_json::array();
  for (const auto& d : datasets) {
    ds.push_back({{"name", d.name},
                  {"path", d.path.generic_string()},
                  {"source", d.source ? std::string(to_string(*d.source)) : ""},
                  {"orientation", d.orientation ? std::string(to_string(*d.orientation)) : ""},
                  {"skip_list", d.skip_list ? d.skip_list->generic_string() : ""}});
  }
  j["kmeans"] = {{"restarts", kmeans.restarts},
                 {"max_iterations", kmeans.max_iterations},
                 {"tolerance", kmeans.tolerance},
                 {"init", to_string(kmeans.init)}};
  j["tradeoff"] = {{"beta", tradeoff.beta},
                   {"alpha", tradeoff.alpha},
                   {"bandwidth", tradeoff.bandwidth.describe()},
                   {"k_sweep", tradeoff.k_sweep}};
  j["rq1"] = {{"baseline_repetitions", alignment.baseline_repetitions},
              {"coverage_floor", alignment.coverage_floor}};
  auto modes = nlohmann::ordered_json::array();
  for (auto m : typicality.modes) modes.push_back(to_string(m));
  j["rq2"] = {{"modes", modes}, {"per_category", typicality.per_category}};
  const auto& mx = synth.mixture;
  j["synth"] = {{"components", mx.components},
                {"points_per_component", mx.points_per_component},
                {"dim", mx.dim},
                {"separation", mx.separation},
                {"component_std", mx.component_std},
                {"typicality_gradient", mx.typicality_gradient},
                {"seed", mx.seed},
                {"perturb_fraction", synth.perturb_fraction},
                {"model_id", synth.model_id},
                {"family", synth.family},
                {"parameters", synth.parameters}};
  return j.dump();
}

}  // namespace semcomp
