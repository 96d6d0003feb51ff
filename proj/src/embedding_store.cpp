#include "semcomp/embedding_store.hpp"

#include "semcomp/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace semcomp {

namespace {

using json = nlohmann::ordered_json;

std::string at_line(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

EmbeddingHeader parse_header(const std::string& text, const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(at_line(path, 1) + "malformed header: " + e.what());
  }
  if (!j.is_object()) throw InputError(at_line(path, 1) + "header is not a JSON object");

  EmbeddingHeader h;
  try {
    h.format = j.at("format").get<std::string>();
    h.version = j.at("version").get<int>();
    h.model_id = j.value("model_id", std::string{});
    auto dim = j.at("dim").get<long long>();
    if (dim < 1) throw InputError(at_line(path, 1) + "header dim must be >= 1");
    h.dim = static_cast<std::size_t>(dim);
    h.layer = j.value("layer", std::string{});
    h.normalized = j.value("normalized", false);
  } catch (const json::exception& e) {
    throw InputError(at_line(path, 1) + "malformed header: " + e.what());
  }
  if (h.format != kEmbeddingFormatTag) {
    throw InputError(at_line(path, 1) + "format tag '" + h.format + "' is not '" +
                     std::string(kEmbeddingFormatTag) + "'");
  }
  if (h.version != kEmbeddingFormatVersion) {
    throw InputError(at_line(path, 1) + "unsupported version " + std::to_string(h.version));
  }
  return h;
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> items, RowMatrix vectors,
                                 std::string model_id, bool normalized, std::string layer,
                                 std::vector<std::vector<std::string>> tokens)
    : items_(std::move(items)),
      vectors_(std::move(vectors)),
      model_id_(std::move(model_id)),
      normalized_(normalized),
      layer_(std::move(layer)),
      tokens_(std::move(tokens)) {
  if (items_.empty()) throw InputError("embedding matrix needs at least one item");
  if (vectors_.cols() < 1) throw InputError("embedding dimension must be >= 1");
  if (static_cast<std::size_t>(vectors_.rows()) != items_.size()) {
    throw InputError("embedding matrix has " + std::to_string(vectors_.rows()) + " rows for " +
                     std::to_string(items_.size()) + " items");
  }
  if (tokens_.empty()) {
    tokens_.reserve(items_.size());
    for (const auto& item : items_) tokens_.push_back({item});
  } else if (tokens_.size() != items_.size()) {
    throw InputError("token lists do not match item count");
  }
  index_.reserve(items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].empty()) throw InputError("empty item id at row " + std::to_string(i));
    if (!index_.emplace(items_[i], i).second) {
      throw InputError("duplicate item id '" + items_[i] + "'");
    }
  }
}

std::optional<std::size_t> EmbeddingMatrix::index_of(std::string_view item) const {
  auto it = index_.find(std::string(item));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::RowVectorXd EmbeddingMatrix::lookup(std::string_view item) const {
  auto idx = index_of(item);
  if (!idx) throw UnknownItemError(std::string(item));
  return vectors_.row(static_cast<Eigen::Index>(*idx));
}

void EmbeddingMatrix::validate() const {
  for (Eigen::Index r = 0; r < vectors_.rows(); ++r) {
    for (Eigen::Index c = 0; c < vectors_.cols(); ++c) {
      if (!std::isfinite(vectors_(r, c))) {
        throw InputError("non-finite value in row '" + items_[static_cast<std::size_t>(r)] +
                         "' at column " + std::to_string(c));
      }
    }
  }
}

EmbeddingMatrix EmbeddingMatrix::unit_normalized() const {
  RowMatrix out = vectors_;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double norm = out.row(r).norm();
    if (norm == 0.0) {
      throw InputError("cannot unit-normalize zero vector for item '" +
                       items_[static_cast<std::size_t>(r)] + "'");
    }
    out.row(r) /= norm;
  }
  return EmbeddingMatrix(items_, std::move(out), model_id_, true, layer_, tokens_);
}

EmbeddingMatrix EmbeddingMatrix::restrict_to(const std::vector<std::string>& items) const {
  RowMatrix out(static_cast<Eigen::Index>(items.size()), vectors_.cols());
  std::vector<std::vector<std::string>> toks;
  toks.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto idx = index_of(items[i]);
    if (!idx) throw UnknownItemError(items[i]);
    out.row(static_cast<Eigen::Index>(i)) = vectors_.row(static_cast<Eigen::Index>(*idx));
    toks.push_back(tokens_[*idx]);
  }
  return EmbeddingMatrix(items, std::move(out), model_id_, normalized_, layer_, std::move(toks));
}

EmbeddingHeader read_embedding_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embedding file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InputError(at_line(path, 1) + "missing header");
  return parse_header(line, path);
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, bool unit_normalize) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embedding file " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw InputError(at_line(path, 1) + "missing header");
  const EmbeddingHeader header = parse_header(line, path);
  const std::size_t dim = header.dim;

  std::vector<std::string> items;
  std::vector<std::vector<std::string>> tokens;
  std::vector<double> values;
  std::unordered_map<std::string, std::size_t> seen;

  std::size_t lineno = 1;
  bool pending_blank = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      pending_blank = true;
      continue;
    }
    if (pending_blank) throw InputError(at_line(path, lineno - 1) + "blank line inside file");

    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(at_line(path, lineno) + "malformed record: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("item") || !rec.contains("vector") ||
        !rec["item"].is_string() || !rec["vector"].is_array()) {
      throw InputError(at_line(path, lineno) + "record needs string 'item' and array 'vector'");
    }
    auto item = rec["item"].get<std::string>();
    if (item.empty()) throw InputError(at_line(path, lineno) + "empty item id");
    if (auto [it, fresh] = seen.emplace(item, lineno); !fresh) {
      throw InputError(at_line(path, lineno) + "duplicate item '" + item + "' (first on line " +
                       std::to_string(it->second) + ")");
    }
    const auto& vec = rec["vector"];
    if (vec.size() != dim) {
      throw InputError(at_line(path, lineno) + "row '" + item + "' has " +
                       std::to_string(vec.size()) + " entries, header dim is " +
                       std::to_string(dim));
    }
    const std::size_t base = values.size();
    double sq = 0.0;
    for (const auto& v : vec) {
      // Non-finite values cannot appear as JSON numbers; nulls and strings land here too.
      if (!v.is_number()) {
        throw InputError(at_line(path, lineno) + "non-finite or non-numeric value in row '" +
                         item + "'");
      }
      const double x = v.get<double>();
      if (!std::isfinite(x)) {
        throw InputError(at_line(path, lineno) + "non-finite value in row '" + item + "'");
      }
      values.push_back(x);
      sq += x * x;
    }
    if (unit_normalize) {
      if (sq == 0.0) {
        throw InputError(at_line(path, lineno) + "zero vector for '" + item +
                         "' cannot be unit-normalized");
      }
      const double norm = std::sqrt(sq);
      for (std::size_t k = base; k < values.size(); ++k) values[k] /= norm;
    }

    std::vector<std::string> toks;
    if (rec.contains("tokens") && rec["tokens"].is_array()) {
      for (const auto& t : rec["tokens"]) {
        if (t.is_string()) toks.push_back(t.get<std::string>());
      }
    }
    if (toks.empty()) toks.push_back(item);
    tokens.push_back(std::move(toks));
    items.push_back(std::move(item));
  }
  if (items.empty()) throw InputError(path.string() + ": no embedding records");

  RowMatrix m = Eigen::Map<RowMatrix>(values.data(), static_cast<Eigen::Index>(items.size()),
                                      static_cast<Eigen::Index>(dim));
  return EmbeddingMatrix(std::move(items), std::move(m), header.model_id,
                         unit_normalize || header.normalized, header.layer, std::move(tokens));
}

void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path) {
  matrix.validate();

  std::ostringstream buf;
  json header;
  header["format"] = kEmbeddingFormatTag;
  header["version"] = kEmbeddingFormatVersion;
  header["model_id"] = matrix.model_id();
  header["dim"] = matrix.dim();
  header["layer"] = matrix.layer();
  header["normalized"] = matrix.normalized();
  buf << header.dump() << '\n';

  const auto& v = matrix.vectors();
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    json rec;
    rec["item"] = matrix.items()[i];
    rec["tokens"] = matrix.tokens()[i];
    auto& arr = rec["vector"] = json::array();
    for (Eigen::Index c = 0; c < v.cols(); ++c) arr.push_back(v(static_cast<Eigen::Index>(i), c));
    buf << rec.dump() << '\n';
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write embedding file " + path.string());
  out << buf.str();
  if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace semcomp
