#pragma once

#include <cstdint>
#include <vector>

#include "genhankel/words.hpp"

namespace genhankel {

/// nu_i = sum_g nu[g] * nu_{S[g]} + sum_s gamma[s] * gamma_s for one vertex.
struct VertexRep {
  std::vector<std::int64_t> nu;     // over generating vertices, in S(w) order
  std::vector<std::int64_t> gamma;  // over letters (match index s = letter id)

  friend bool operator==(const VertexRep&, const VertexRep&) = default;
};

/// Every circuit vertex expressed through the free generating variables and
/// the match offsets gamma_s = t_{i_s} - t_{j_s}, t_i = nu_{i-1} + nu_i.
struct LinearRep {
  Word word;
  std::vector<int> generating;       // S(w), ascending
  std::vector<int> generating_slot;  // vertex -> index into `generating`, -1 otherwise
  std::vector<VertexRep> vertex;     // indices 0..2k

  bool is_generating(int v) const { return generating_slot[static_cast<std::size_t>(v)] >= 0; }
};

LinearRep linear_representation(const Word& w);

enum class Closure { consistent, inconsistent };

/// Consistent iff the nu-part of vertex 2k is exactly nu_0, so the closing
/// condition nu_0 = nu_2k only constrains gamma.
Closure closure_type(const LinearRep& rep);

const char* to_string(Closure c);

}  // namespace genhankel
