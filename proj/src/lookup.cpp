#include "chunkblit/lookup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace chunkblit {

namespace {

constexpr int kLeafSize = 8;
constexpr double kUnreached = std::numeric_limits<double>::infinity();

int bin_of(float v, int resolution) {
  const int b = int(std::floor(double(v) * resolution));
  return std::clamp(b, 0, resolution - 1);
}

// One pass of the separable squared distance transform (lower envelope of
// parabolas). `cost[i]` is the incoming cost at site i (infinite when empty);
// on return `cost` holds min_j weight*(i-j)^2 + cost[j] and `from[i]` the
// minimizing j. With zero weight every cell takes the cheapest site.
void distance_pass(std::vector<double>& cost, std::vector<int>& from, double weight) {
  const int n = int(cost.size());
  from.assign(n, -1);
  if (weight <= 0.0) {
    int best = -1;
    for (int i = 0; i < n; ++i)
      if (cost[i] < kUnreached && (best < 0 || cost[i] < cost[best])) best = i;
    if (best < 0) return;
    const double c = cost[best];
    std::fill(cost.begin(), cost.end(), c);
    std::fill(from.begin(), from.end(), best);
    return;
  }

  std::vector<int> sites;
  std::vector<double> bounds;
  auto crossing = [&](int a, int b) {
    return ((cost[b] + weight * b * b) - (cost[a] + weight * a * a)) / (2.0 * weight * (b - a));
  };
  for (int q = 0; q < n; ++q) {
    if (!(cost[q] < kUnreached)) continue;
    while (!sites.empty()) {
      const double s = crossing(sites.back(), q);
      if (s <= bounds.back()) {
        sites.pop_back();
        bounds.pop_back();
      } else {
        break;
      }
    }
    bounds.push_back(sites.empty() ? -kUnreached : crossing(sites.back(), q));
    sites.push_back(q);
  }
  if (sites.empty()) return;

  std::vector<double> out(n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    while (k + 1 < sites.size() && bounds[k + 1] < i) ++k;
    const int j = sites[k];
    out[i] = weight * double(i - j) * double(i - j) + cost[j];
    from[i] = j;
  }
  cost.swap(out);
}

}  // namespace

GuideLookup build_lookup(const GuideField& source, LookupBackend backend, int resolution) {
  source.validate();
  if (backend == LookupBackend::QuantizedTable) {
    if (source.channels() != 2)
      throw ContractViolation("quantized-table lookup needs exactly 2 guide channels, got " +
                              std::to_string(source.channels()));
    if (resolution < 1) throw ContractViolation("lookup resolution must be positive");
  }

  GuideLookup lut;
  lut.backend_ = backend;
  lut.resolution_ = resolution;
  lut.channels_ = source.channels();
  lut.width_ = source.width();
  lut.weights_ = source.weights;
  lut.labeled_ = source.labels.has_value();

  const int c = source.channels();
  for (int y = 0; y < source.height(); ++y) {
    for (int x = 0; x < source.width(); ++x) {
      if (!source.masked_in(x, y)) continue;
      const std::int32_t index = y * source.width() + x;
      const float* v = source.values_ptr(x, y);
      lut.all_.pixels.push_back(index);
      lut.all_.points.insert(lut.all_.points.end(), v, v + c);
      if (lut.labeled_) {
        auto& part = lut.by_label_[(*source.labels)(x, y)];
        part.pixels.push_back(index);
        part.points.insert(part.points.end(), v, v + c);
      }
    }
  }
  if (lut.all_.pixels.empty()) throw EmptyExemplarError();

  lut.build_partition(lut.all_);
  for (auto& [label, part] : lut.by_label_) lut.build_partition(part);
  return lut;
}

void GuideLookup::build_partition(Partition& part) const {
  if (backend_ == LookupBackend::QuantizedTable)
    build_table(part);
  else
    build_tree(part);
}

void GuideLookup::build_table(Partition& part) const {
  const int r = resolution_;
  const std::size_t bins = std::size_t(r) * r;
  part.bins.assign(bins, -1);
  std::vector<float> best(bins, std::numeric_limits<float>::infinity());

  // Occupied bins keep the member closest to the bin centre (first in scan order on ties).
  for (std::size_t i = 0; i < part.pixels.size(); ++i) {
    const float* v = part.points.data() + i * 2;
    const int bx = bin_of(v[0], r);
    const int by = bin_of(v[1], r);
    const float centre[2] = {(float(bx) + 0.5f) / float(r), (float(by) + 0.5f) / float(r)};
    const float d = weighted_distance(v, centre, weights_.data(), 2);
    const std::size_t slot = std::size_t(by) * r + bx;
    if (d < best[slot]) {
      best[slot] = d;
      part.bins[slot] = part.pixels[i];
    }
  }

  // Empty bins inherit the occupant of the nearest occupied bin.
  std::vector<double> row_cost(r), col_cost(r);
  std::vector<int> row_from, col_from;
  std::vector<double> stage(bins);
  std::vector<int> stage_from(bins);
  for (int by = 0; by < r; ++by) {
    for (int bx = 0; bx < r; ++bx)
      row_cost[bx] = part.bins[std::size_t(by) * r + bx] >= 0 ? 0.0 : kUnreached;
    distance_pass(row_cost, row_from, weights_[0]);
    for (int bx = 0; bx < r; ++bx) {
      stage[std::size_t(by) * r + bx] = row_cost[bx];
      stage_from[std::size_t(by) * r + bx] = row_from[bx];
    }
  }
  std::vector<std::int32_t> filled(bins, -1);
  for (int bx = 0; bx < r; ++bx) {
    for (int by = 0; by < r; ++by) col_cost[by] = stage[std::size_t(by) * r + bx];
    distance_pass(col_cost, col_from, weights_[1]);
    for (int by = 0; by < r; ++by) {
      const int src_row = col_from[by];
      const int src_col = stage_from[std::size_t(src_row) * r + bx];
      filled[std::size_t(by) * r + bx] = part.bins[std::size_t(src_row) * r + src_col];
    }
  }
  part.bins.swap(filled);
}

void GuideLookup::build_tree(Partition& part) const {
  const int c = channels_;
  const int n = int(part.pixels.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  part.nodes.clear();

  auto value = [&](int i, int axis) { return part.points[std::size_t(i) * c + axis]; };

  struct Task {
    int node, begin, end;
  };
  part.nodes.push_back({});
  std::vector<Task> stack{{0, 0, n}};
  while (!stack.empty()) {
    const Task task = stack.back();
    stack.pop_back();
    KdNode node;
    node.begin = task.begin;
    node.end = task.end;

    int axis = -1;
    float widest = 0.0f;
    if (task.end - task.begin > kLeafSize) {
      for (int a = 0; a < c; ++a) {
        float lo = std::numeric_limits<float>::infinity(), hi = -lo;
        for (int i = task.begin; i < task.end; ++i) {
          lo = std::min(lo, value(order[i], a));
          hi = std::max(hi, value(order[i], a));
        }
        const float spread = std::sqrt(weights_[a]) * (hi - lo);
        if (spread > widest) {
          widest = spread;
          axis = a;
        }
      }
    }
    if (axis >= 0) {
      const int mid = task.begin + (task.end - task.begin) / 2;
      std::nth_element(order.begin() + task.begin, order.begin() + mid, order.begin() + task.end,
                       [&](int a, int b) {
                         const float va = value(a, axis), vb = value(b, axis);
                         return va < vb || (va == vb && a < b);
                       });
      node.axis = axis;
      node.split = value(order[mid], axis);
      node.left = int(part.nodes.size());
      node.right = node.left + 1;
      part.nodes.push_back({});
      part.nodes.push_back({});
      stack.push_back({node.left, task.begin, mid});
      stack.push_back({node.right, mid, task.end});
    }
    part.nodes[task.node] = node;
  }

  std::vector<std::int32_t> pixels(n);
  std::vector<float> points(std::size_t(n) * c);
  for (int i = 0; i < n; ++i) {
    pixels[i] = part.pixels[order[i]];
    std::copy_n(part.points.begin() + std::ptrdiff_t(order[i]) * c, c,
                points.begin() + std::ptrdiff_t(i) * c);
  }
  part.pixels.swap(pixels);
  part.points.swap(points);
}

std::int32_t GuideLookup::query_table(const Partition& part, const float* values) const {
  const int bx = bin_of(values[0], resolution_);
  const int by = bin_of(values[1], resolution_);
  return part.bins[std::size_t(by) * resolution_ + bx];
}

std::int32_t GuideLookup::query_tree(const Partition& part, const float* values) const {
  const int c = channels_;
  const float* w = weights_.data();
  float best = std::numeric_limits<float>::infinity();
  std::int32_t best_pixel = std::numeric_limits<std::int32_t>::max();

  // Depth-first with explicit stack; a subtree is skipped only when its bound
  // is strictly worse, so equal-distance candidates are still compared by index.
  struct Pending {
    int node;
    float bound;
  };
  Pending stack[64];
  int top = 0;
  stack[top++] = {0, 0.0f};
  while (top > 0) {
    const Pending item = stack[--top];
    if (item.bound > best) continue;
    const KdNode& node = part.nodes[item.node];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const float d = weighted_distance(values, part.points.data() + std::size_t(i) * c, w, c);
        const std::int32_t pixel = part.pixels[i];
        if (d < best || (d == best && pixel < best_pixel)) {
          best = d;
          best_pixel = pixel;
        }
      }
      continue;
    }
    const float diff = values[node.axis] - node.split;
    const float plane = std::sqrt(w[node.axis] * (diff * diff));
    const bool left_first = diff < 0.0f;
    const int near = left_first ? node.left : node.right;
    const int far = left_first ? node.right : node.left;
    stack[top++] = {far, std::max(item.bound, plane)};
    stack[top++] = {near, item.bound};
  }
  return best_pixel;
}

std::int32_t GuideLookup::query(const Partition& part, const float* values) const {
  return backend_ == LookupBackend::QuantizedTable ? query_table(part, values)
                                                   : query_tree(part, values);
}

std::optional<PixelCoord> GuideLookup::nearest(const float* values,
                                               std::optional<std::int32_t> label) const {
  if (!labeled_ || !label) return coord(query(all_, values));
  const auto it = by_label_.find(*label);
  if (it == by_label_.end()) return std::nullopt;
  return coord(query(it->second, values));
}

PixelCoord GuideLookup::nearest_any(const float* values) const {
  return coord(query(all_, values));
}

std::optional<PixelCoord> lookup_nearest(const GuideLookup& lut, const GuideVector& g) {
  if (g.values.size() != lut.channels())
    throw ContractViolation("lookup_nearest: query has " + std::to_string(g.values.size()) +
                            " channels, lookup expects " + std::to_string(lut.channels()));
  return lut.nearest(g.values.data(), g.label);
}

}  // namespace chunkblit
