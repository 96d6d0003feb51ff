#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semcomp {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::string_view kEmbeddingFormatTag = "cemb-jsonl";
inline constexpr int kEmbeddingFormatVersion = 1;

/// First line of a cemb-jsonl file.
struct EmbeddingHeader {
  std::string format{kEmbeddingFormatTag};
  int version = kEmbeddingFormatVersion;
  std::string model_id;
  std::size_t dim = 0;
  std::string layer;
  bool normalized = false;
};

/// Static item embeddings: one row per item, rows in item order.
///
/// The constructor enforces the structural invariants (unique nonempty ids,
/// |X| >= 1, d >= 1, one row per item). Finiteness is checked by validate(),
/// which load and save both call, so a matrix holding NaN can exist in memory
/// but can never be read from or written to disk.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix(std::vector<std::string> items, RowMatrix vectors, std::string model_id = {},
                  bool normalized = false, std::string layer = {},
                  std::vector<std::vector<std::string>> tokens = {});

  std::size_t size() const noexcept { return items_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(vectors_.cols()); }

  const std::vector<std::string>& items() const noexcept { return items_; }
  const RowMatrix& vectors() const noexcept { return vectors_; }
  const std::string& model_id() const noexcept { return model_id_; }
  const std::string& layer() const noexcept { return layer_; }
  bool normalized() const noexcept { return normalized_; }
  /// Sub-token strings per item; informational only.
  const std::vector<std::vector<std::string>>& tokens() const noexcept { return tokens_; }

  std::optional<std::size_t> index_of(std::string_view item) const;
  bool contains(std::string_view item) const { return index_of(item).has_value(); }

  /// Row for `item` (exact, case-sensitive match). Throws UnknownItemError.
  Eigen::RowVectorXd lookup(std::string_view item) const;

  /// Throws InputError naming the first non-finite entry.
  void validate() const;

  /// Copy with every row scaled to unit Euclidean norm. Zero rows are rejected.
  EmbeddingMatrix unit_normalized() const;

  /// Copy holding only `items`, in the given order. Throws UnknownItemError.
  EmbeddingMatrix restrict_to(const std::vector<std::string>& items) const;

 private:
  std::vector<std::string> items_;
  RowMatrix vectors_;
  std::string model_id_;
  bool normalized_;
  std::string layer_;
  std::vector<std::vector<std::string>> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, bool unit_normalize = false);

void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path);

/// Reads and checks only the first line.
EmbeddingHeader read_embedding_header(const std::filesystem::path& path);

}  // namespace semcomp
