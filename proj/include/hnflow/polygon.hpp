#pragma once

#include <vector>

#include "hnflow/rational.hpp"

namespace hnflow {

class HnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vertex list of a lower convex hull over {(dim V, phi(V))}: starts at
/// (0,0), ends at (d, phi(full)); dims and segment slopes strictly increase.
struct GraysonPolygon {
  std::vector<std::pair<int, Rat>> vertices;

  int ambientDim() const { return vertices.empty() ? 0 : vertices.back().first; }

  std::vector<Rat> segmentSlopes() const {
    std::vector<Rat> s;
    for (size_t i = 1; i < vertices.size(); ++i) {
      Rat rise = vertices[i].second - vertices[i - 1].second;
      Rat run(vertices[i].first - vertices[i - 1].first);
      s.push_back(rise / run);
    }
    return s;
  }

  /// Value of the piecewise-linear function at integer x in [0, d].
  Rat valueAt(int x) const;

  /// Convexity + endpoint invariants; throws HnError when violated.
  void validate() const;

  bool operator==(const GraysonPolygon& o) const { return vertices == o.vertices; }
};

/// Lower convex hull of exact points (x strictly increasing on input is not
/// required; duplicate x keeps the minimum y). Collinear interior points are
/// dropped, so segment slopes strictly increase.
GraysonPolygon lowerHull(std::vector<std::pair<int, Rat>> points);

/// Lambda_k = slope of the polygon segment covering (d_{l-1}, d_l] for each
/// k = 1..d; nondecreasing, sums to phi(full).
std::vector<Rat> slopesToLambda(const GraysonPolygon& p);

/// Ordered Bell number b(n) (weak orderings of n items) by the binomial
/// recurrence.
Int orderedBell(int n);

}  // namespace hnflow
