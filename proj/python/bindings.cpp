#include "semcomp/errors.hpp"
#include "semcomp/pipeline.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace semcomp;

namespace {

std::vector<std::string> index_items(std::size_t n) {
  std::vector<std::string> items;
  items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) items.push_back(std::to_string(i));
  return items;
}

EmbeddingMatrix matrix_of(const RowMatrix& vectors) {
  return EmbeddingMatrix(index_items(static_cast<std::size_t>(vectors.rows())), vectors);
}

Partition partition_of(const std::vector<long long>& labels) { return Partition::from_ints(labels); }

std::vector<long long> labels_of(const Partition& p) {
  return {p.labels().begin(), p.labels().end()};
}

py::dict scores_dict(const AlignmentScores& s) {
  py::dict d;
  d["mi"] = s.mi;
  d["nmi"] = s.nmi;
  d["ami"] = s.ami;
  d["ari"] = s.ari;
  d["entropy_u"] = s.entropy_u;
  d["entropy_v"] = s.entropy_v;
  d["expected_mi"] = s.expected_mi;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compression-meaning trade-off analysis core";
  m.attr("__version__") = std::string(kToolkitVersion);

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  m.def(
      "load_embeddings",
      [](const std::filesystem::path& path, bool unit_normalize) {
        const auto e = load_embeddings(path, unit_normalize);
        py::dict d;
        d["items"] = e.items();
        d["vectors"] = e.vectors();
        d["model_id"] = e.model_id();
        d["layer"] = e.layer();
        d["normalized"] = e.normalized();
        return d;
      },
      py::arg("path"), py::arg("unit_normalize") = false);

  m.def(
      "save_embeddings",
      [](const std::filesystem::path& path, std::vector<std::string> items, const RowMatrix& vectors,
         std::string model_id, bool normalized, std::string layer) {
        save_embeddings(EmbeddingMatrix(std::move(items), vectors, std::move(model_id), normalized,
                                        std::move(layer)),
                        path);
      },
      py::arg("path"), py::arg("items"), py::arg("vectors"), py::arg("model_id") = "",
      py::arg("normalized") = false, py::arg("layer") = "");

  m.def(
      "alignment_scores",
      [](const std::vector<long long>& u, const std::vector<long long>& v) {
        return scores_dict(alignment_scores(partition_of(u), partition_of(v)));
      },
      py::arg("u"), py::arg("v"));

  m.def("complexity", [](const std::vector<long long>& labels) { return complexity(partition_of(labels)); },
        py::arg("labels"));

  m.def(
      "distortion",
      [](const RowMatrix& vectors, const std::vector<long long>& labels) {
        return distortion(matrix_of(vectors), partition_of(labels));
      },
      py::arg("vectors"), py::arg("labels"));

  m.def(
      "l_objective",
      [](const RowMatrix& vectors, const std::vector<long long>& labels, double beta, double alpha) {
        TradeoffConfig cfg;
        cfg.alpha = alpha;
        const auto r = l_objective(matrix_of(vectors), partition_of(labels), beta, cfg);
        py::dict d;
        d["complexity"] = r.complexity;
        d["distortion"] = r.distortion;
        d["l_value"] = r.l_value;
        d["mean_cluster_entropy"] = r.mean_cluster_entropy;
        return d;
      },
      py::arg("vectors"), py::arg("labels"), py::arg("beta") = 1.0, py::arg("alpha") = 2.0);

  m.def(
      "kmeans",
      [](const RowMatrix& vectors, std::size_t k, std::size_t restarts, std::uint64_t seed) {
        KMeansConfig cfg;
        cfg.k = k;
        cfg.restarts = restarts;
        cfg.seed = seed;
        const auto results = kmeans(matrix_of(vectors), cfg);
        const auto& best = best_of_restarts(results);
        py::dict d;
        d["labels"] = labels_of(best.partition);
        d["distortion"] = best.distortion;
        d["restart"] = best.restart;
        d["centroids"] = best.centroids.centroids;
        return d;
      },
      py::arg("vectors"), py::arg("k"), py::arg("restarts") = 100, py::arg("seed") = 0);

  m.def(
      "spearman",
      [](const std::vector<double>& xs, const std::vector<double>& ys) {
        const auto r = spearman(xs, ys);
        return py::make_tuple(r.rho ? py::cast(*r.rho) : py::none(),
                              r.p_value ? py::cast(*r.p_value) : py::none());
      },
      py::arg("xs"), py::arg("ys"));

  m.def(
      "generate_mixture",
      [](std::size_t components, std::size_t points_per_component, std::size_t dim, double separation,
         std::uint64_t seed) {
        MixtureSpec spec;
        spec.components = components;
        spec.points_per_component = points_per_component;
        spec.dim = dim;
        spec.separation = separation;
        spec.seed = seed;
        const auto w = generate_mixture(spec);
        py::dict d;
        d["items"] = w.embeddings.items();
        d["vectors"] = w.embeddings.vectors();
        d["labels"] = labels_of(w.truth);
        return d;
      },
      py::arg("components") = 3, py::arg("points_per_component") = 50, py::arg("dim") = 8,
      py::arg("separation") = 10.0, py::arg("seed") = 0);

  m.def(
      "run",
      [](const std::filesystem::path& config, std::optional<std::uint64_t> seed,
         std::optional<std::filesystem::path> out) {
        auto cfg = load_config(config);
        if (seed) cfg.seed = *seed;
        if (out) cfg.output_dir = *out;
        Pipeline pipeline(std::move(cfg));
        const auto manifest = pipeline.run_all();
        py::dict d;
        d["config_hash"] = manifest.config_hash;
        py::dict files;
        for (const auto& o : manifest.outputs) files[py::str(o.path)] = o.sha256;
        d["outputs"] = files;
        return d;
      },
      py::arg("config"), py::arg("seed") = py::none(), py::arg("out") = py::none());
}
