#include "hnflow/polygon.hpp"

#include <algorithm>
#include <map>

namespace hnflow {

Rat GraysonPolygon::valueAt(int x) const {
  if (vertices.empty()) throw HnError("polygon: empty");
  if (x < vertices.front().first || x > vertices.back().first)
    throw HnError("polygon: x out of range");
  for (size_t i = 1; i < vertices.size(); ++i) {
    if (x > vertices[i].first) continue;
    int x0 = vertices[i - 1].first;
    Rat y0 = vertices[i - 1].second;
    if (x == x0) return y0;
    Rat slope = (vertices[i].second - y0) / Rat(vertices[i].first - x0);
    return y0 + slope * Rat(x - x0);
  }
  return vertices.back().second;
}

void GraysonPolygon::validate() const {
  if (vertices.size() < 2) throw HnError("polygon: needs at least two vertices");
  if (vertices.front().first != 0 || !vertices.front().second.isZero())
    throw HnError("polygon: must start at (0,0)");
  for (size_t i = 1; i < vertices.size(); ++i)
    if (vertices[i].first <= vertices[i - 1].first)
      throw HnError("polygon: dims must strictly increase");
  auto slopes = segmentSlopes();
  for (size_t i = 1; i < slopes.size(); ++i)
    if (!(slopes[i - 1] < slopes[i])) throw HnError("polygon: slopes must strictly increase");
}

GraysonPolygon lowerHull(std::vector<std::pair<int, Rat>> points) {
  if (points.empty()) throw HnError("lowerHull: no points");
  std::map<int, Rat> best;
  for (auto& [x, y] : points) {
    auto it = best.find(x);
    if (it == best.end() || y < it->second) best[x] = y;
  }
  // monotone chain, lower side; exact cross products
  std::vector<std::pair<int, Rat>> hull;
  for (const auto& [x, y] : best) {
    while (hull.size() >= 2) {
      const auto& [x1, y1] = hull[hull.size() - 2];
      const auto& [x2, y2] = hull[hull.size() - 1];
      // keep (x2,y2) only if it turns strictly upward: (y2-y1)(x-x1) < (y-y1)(x2-x1)
      Rat lhs = (y2 - y1) * Rat(x - x1);
      Rat rhs = (y - y1) * Rat(x2 - x1);
      if (lhs < rhs) break;
      hull.pop_back();
    }
    hull.emplace_back(x, y);
  }
  GraysonPolygon p;
  p.vertices = std::move(hull);
  return p;
}

std::vector<Rat> slopesToLambda(const GraysonPolygon& p) {
  p.validate();
  std::vector<Rat> lambda;
  auto slopes = p.segmentSlopes();
  for (size_t seg = 1; seg < p.vertices.size(); ++seg) {
    int len = p.vertices[seg].first - p.vertices[seg - 1].first;
    for (int k = 0; k < len; ++k) lambda.push_back(slopes[seg - 1]);
  }
  return lambda;
}

Int orderedBell(int n) {
  if (n < 0) throw std::invalid_argument("orderedBell: n >= 0 required");
  std::vector<Int> b(static_cast<size_t>(n) + 1);
  b[0] = 1;
  for (int m = 1; m <= n; ++m) {
    Int acc(0);
    for (int k = 1; k <= m; ++k) acc += binomial(m, k) * b[static_cast<size_t>(m - k)];
    b[static_cast<size_t>(m)] = acc;
  }
  return b[static_cast<size_t>(n)];
}

}  // namespace hnflow
