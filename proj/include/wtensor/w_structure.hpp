#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "wtensor/symmetric_tensor.hpp"

namespace wtensor {

enum class BlockKind {
  SingleMixedTerm,    ///< exactly one off-diagonal monomial, any sign
  NonnegOffDiagonal,  ///< every off-diagonal coefficient >= 0
};

const char* to_string(BlockKind kind);

struct WBlock {
  std::vector<int> gamma;     ///< sorted global indices (1-based)
  SymmetricTensor subtensor;  ///< over local coordinates 1..|gamma|
  BlockKind kind = BlockKind::NonnegOffDiagonal;
  std::optional<MultiIndex> mixed;  ///< local index of the mixed term for SingleMixedTerm

  int local_of(int global) const;  ///< 1-based local coordinate, 0 if absent
};

/// A validated W-decomposition: blocks whose subtensors sum to the tensor,
/// each block overlapping the union of the preceding ones (in `ordering`) in at
/// most one index.
struct WDecomposition {
  int order = 0;
  int global_dim = 0;
  std::vector<WBlock> blocks;
  /// coverage[i-1] = sorted block positions l with i in gamma_l.
  std::vector<std::vector<int>> coverage;
  /// Block positions in an order satisfying the overlap condition.
  std::vector<int> ordering;
  bool reordered = false;

  std::size_t size() const { return blocks.size(); }
  /// Sum of the embedded subtensors as a global tensor.
  SymmetricTensor assemble() const;
};

/// Classifies a subtensor; nullopt when it has negative mixed terms and more than one mixed term.
std::optional<BlockKind> classify_block(const SymmetricTensor& sub);

/// Embeds a local subtensor into the global coordinate system.
SymmetricTensor embed(const SymmetricTensor& sub, const std::vector<int>& gamma, int global_dim);
/// Restricts `t` to the monomials supported on `gamma`, in local coordinates.
SymmetricTensor restrict_to(const SymmetricTensor& t, const std::vector<int>& gamma);

WDecomposition validate(const SymmetricTensor& t, std::vector<std::vector<int>> gamma,
                        std::vector<SymmetricTensor> subtensors);

/// Disjoint-component detection over the mixed-monomial support graph.
std::optional<WDecomposition> detect(const SymmetricTensor& t);

/// weights[i-1] lists the diagonal share of index i for each block in coverage[i-1].
WDecomposition reallocate_diagonal(const WDecomposition& w,
                                   const std::vector<std::vector<double>>& weights);

/// {"gamma": [[...], ...], "subtensors": [<tensor json>, ...]}
nlohmann::json decomposition_to_json(const WDecomposition& w);
WDecomposition decomposition_from_json(const SymmetricTensor& t, const nlohmann::json& j);

}  // namespace wtensor
