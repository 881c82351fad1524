#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wtensor/eigen_sos.hpp"
#include "wtensor/symmetric_tensor.hpp"

namespace wtensor {

enum class ZBlockKind { OneMixedTerm, AllNonpositiveMixed };
const char* to_string(ZBlockKind k);

/// Disjoint index blocks covering [n]; every mixed monomial lives inside one block.
struct ExtendedZStructure {
  std::vector<std::vector<int>> blocks;  ///< sorted, ordered by smallest index
  std::vector<ZBlockKind> kinds;
  std::vector<double> diagonal;          ///< coefficient of x_i^m, index i-1
};

/// Components of the mixed-term support graph, each holding one mixed term or
/// only nonpositive ones. On failure `reason` (if given) says why.
std::optional<ExtendedZStructure> detect_extended_z(const SymmetricTensor& t, std::string* reason = nullptr);

/// Re-checks a structure against the tensor: partition, containment, and the per-block rule.
bool check_extended_z(const SymmetricTensor& t, const ExtendedZStructure& s);

/// x_i -> x_i^2: the coefficient of x^alpha moves to x^{2 alpha}.
SymmetricTensor lift_even(const SymmetricTensor& t);

enum class Verdict { Copositive, NotCopositive, NotExtendedZ };
const char* to_string(Verdict v);

struct CopositivityVerdict {
  Verdict verdict = Verdict::NotExtendedZ;
  double bound = 0.0;    ///< largest H-eigenvalue of the negated lift
  bool borderline = false;  ///< |bound| within the verdict threshold
  std::optional<ExtendedZStructure> structure;
  std::optional<EigResult> eig;   ///< solve details and certificate
  std::vector<double> witness;    ///< nonnegative x with T x^m < 0 (NotCopositive, if found)
  std::string message;
};

/// Verdict threshold on the bound.
inline constexpr double kCopositiveThreshold = 1e-7;

CopositivityVerdict is_copositive(const SymmetricTensor& t, const EigConfig& cfg = {});

/// Random extended Z-tensor: a random partition of [n] into s blocks of size k,
/// every diagonal coefficient M, one random positive mixed term in each of the
/// first s-1 blocks, and every mixed entry of the last block drawn from -U[0,1].
SymmetricTensor gen_random_extended_z(int m, int n, int s, int k, double M, std::uint64_t seed);

}  // namespace wtensor
