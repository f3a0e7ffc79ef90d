#include "partforge/planner/rrt_connect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "partforge/common/error.hpp"
#include "partforge/common/rng.hpp"
#include "partforge/geom/pose.hpp"

namespace partforge::planner {

namespace {

// Per block: translation plus sin/cos of each angle scaled so that small
// angle changes weigh 0.3 m per radian.
constexpr int kEmbedPerBlock = 9;
constexpr float kAngleWeight = 0.3f;

double arc(double from, double to) { return geom::normalize_angle(to - from); }

class Tree {
 public:
  explicit Tree(int dimension) : dim_(dimension), edim_(dimension / 6 * kEmbedPerBlock) {}

  int add(const Config& q, int parent) {
    nodes_.push_back(q);
    parents_.push_back(parent);
    for (int b = 0; b < dim_ / 6; ++b) {
      const double* x = q.data() + 6 * b;
      embed_.push_back(static_cast<float>(x[0]));
      embed_.push_back(static_cast<float>(x[1]));
      embed_.push_back(static_cast<float>(x[2]));
      for (int k = 3; k < 6; ++k) {
        embed_.push_back(kAngleWeight * static_cast<float>(std::sin(x[k])));
        embed_.push_back(kAngleWeight * static_cast<float>(std::cos(x[k])));
      }
    }
    return static_cast<int>(nodes_.size()) - 1;
  }

  int nearest(const Config& q) const {
    std::vector<float> e;
    e.reserve(edim_);
    for (int b = 0; b < dim_ / 6; ++b) {
      const double* x = q.data() + 6 * b;
      e.push_back(static_cast<float>(x[0]));
      e.push_back(static_cast<float>(x[1]));
      e.push_back(static_cast<float>(x[2]));
      for (int k = 3; k < 6; ++k) {
        e.push_back(kAngleWeight * static_cast<float>(std::sin(x[k])));
        e.push_back(kAngleWeight * static_cast<float>(std::cos(x[k])));
      }
    }
    int best = 0;
    float best_d = std::numeric_limits<float>::infinity();
    const std::size_t n = nodes_.size();
    const float* row = embed_.data();
    for (std::size_t i = 0; i < n; ++i, row += edim_) {
      float d = 0;
      for (int k = 0; k < edim_; ++k) {
        const float diff = row[k] - e[k];
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  // Removes the node and its descendants from nearest-neighbour queries.
  void prune(int root) {
    std::vector<char> dead(nodes_.size(), 0);
    dead[root] = 1;
    // children always have larger indices than their parents
    for (std::size_t i = root + 1; i < nodes_.size(); ++i) {
      if (parents_[i] >= 0 && dead[parents_[i]]) dead[i] = 1;
    }
    for (std::size_t i = root; i < nodes_.size(); ++i) {
      if (!dead[i]) continue;
      std::fill_n(embed_.begin() + i * edim_, edim_, std::numeric_limits<float>::max() / 64);
    }
  }

  const Config& node(int i) const { return nodes_[i]; }
  int parent(int i) const { return parents_[i]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  int dim_;
  int edim_;
  std::vector<Config> nodes_;
  std::vector<int> parents_;
  std::vector<float> embed_;
};

enum class Extend { Trapped, Advanced, Reached };

struct Search {
  const ConfigSpace& space;
  const RrtParams& params;
  std::int64_t attempted = 0;

  Config steer(const Config& from, const Config& to) const {
    double ratio = 1.0;
    for (int b = 0; b < space.blocks(); ++b) {
      const BlockDelta d = max_block_delta(std::span(from).subspan(6 * b, 6),
                                           std::span(to).subspan(6 * b, 6));
      if (d.translation > params.step_translation) {
        ratio = std::min(ratio, params.step_translation / d.translation);
      }
      if (d.rotation > params.step_rotation) {
        ratio = std::min(ratio, params.step_rotation / d.rotation);
      }
    }
    return interpolate(from, to, ratio);
  }

  Extend extend(Tree& tree, const Config& target, int& new_node) {
    const int near = tree.nearest(target);
    const Config& q_near = tree.node(near);
    if (q_near == target) {
      new_node = near;
      return Extend::Reached;
    }
    Config q_new = steer(q_near, target);
    ++attempted;
    if (!space.is_valid(q_new) || !check_motion(space, q_near, q_new, params.resolution)) {
      return Extend::Trapped;
    }
    const bool reached = q_new == target;
    new_node = tree.add(q_new, near);
    return reached ? Extend::Reached : Extend::Advanced;
  }

  bool exhausted() const { return attempted >= params.max_states; }
};

// Node ids from `node` up to the root.
std::vector<int> branch(const Tree& tree, int node) {
  std::vector<int> out;
  for (int i = node; i >= 0; i = tree.parent(i)) out.push_back(i);
  return out;
}

}  // namespace

void ConfigSpace::check() const {
  if (dimension <= 0 || dimension % 6 != 0) {
    throw Error(ErrorCode::InvalidQuery, "dimension must be a positive multiple of 6");
  }
  if (static_cast<int>(lower.size()) != dimension || static_cast<int>(upper.size()) != dimension) {
    throw Error(ErrorCode::InvalidQuery, "bounds do not match dimension");
  }
  for (int i = 0; i < dimension; ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || lower[i] > upper[i]) {
      throw Error(ErrorCode::InvalidQuery, "bounds must be finite and ordered");
    }
    if (i % 6 >= 3 && (lower[i] < -M_PI - 1e-12 || upper[i] > M_PI + 1e-12)) {
      throw Error(ErrorCode::InvalidQuery, "angle bounds exceed pi");
    }
  }
  if (!is_valid) throw Error(ErrorCode::InvalidQuery, "missing validity predicate");
}

ConfigSpace make_rigid_space(int bodies, const double (&lo)[3], const double (&hi)[3],
                             std::function<bool(std::span<const double>)> is_valid) {
  ConfigSpace s;
  s.dimension = 6 * bodies;
  for (int b = 0; b < bodies; ++b) {
    for (int k = 0; k < 3; ++k) {
      s.lower.push_back(lo[k]);
      s.upper.push_back(hi[k]);
    }
    for (int k = 0; k < 3; ++k) {
      s.lower.push_back(-M_PI);
      s.upper.push_back(M_PI);
    }
  }
  s.is_valid = std::move(is_valid);
  return s;
}

Config interpolate(std::span<const double> a, std::span<const double> b, double s) {
  if (s >= 1.0) return Config(b.begin(), b.end());
  Config out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i % 6 < 3) {
      out[i] = a[i] + s * (b[i] - a[i]);
    } else {
      out[i] = geom::normalize_angle(a[i] + s * arc(a[i], b[i]));
    }
  }
  return out;
}

BlockDelta max_block_delta(std::span<const double> a, std::span<const double> b) {
  BlockDelta out;
  for (std::size_t blk = 0; blk + 6 <= a.size(); blk += 6) {
    double t = 0, r = 0;
    for (int k = 0; k < 3; ++k) {
      const double dt = b[blk + k] - a[blk + k];
      const double dr = arc(a[blk + 3 + k], b[blk + 3 + k]);
      t += dt * dt;
      r += dr * dr;
    }
    out.translation = std::max(out.translation, std::sqrt(t));
    out.rotation = std::max(out.rotation, std::sqrt(r));
  }
  return out;
}

bool check_motion(const ConfigSpace& space, std::span<const double> a, std::span<const double> b,
                  const Resolution& resolution) {
  const BlockDelta d = max_block_delta(a, b);
  const double steps =
      std::max(d.translation / resolution.translation, d.rotation / resolution.rotation);
  const int n = std::max(1, static_cast<int>(std::ceil(steps - 1e-12)));
  for (int i = 0; i <= n; ++i) {
    if (!space.is_valid(interpolate(a, b, static_cast<double>(i) / n))) return false;
  }
  return true;
}

PlanOutcome rrt_connect(const ConfigSpace& space, const Config& start, const Config& goal,
                        const RrtParams& params) {
  space.check();
  if (static_cast<int>(start.size()) != space.dimension ||
      static_cast<int>(goal.size()) != space.dimension) {
    throw Error(ErrorCode::InvalidQuery, "query dimension mismatch");
  }
  if (!(params.goal_bias >= 0 && params.goal_bias < 1) || params.max_states < 1) {
    throw Error(ErrorCode::InvalidQuery, "goal_bias must be in [0,1) and max_states >= 1");
  }
  if (!space.is_valid(start)) throw Error(ErrorCode::InvalidQuery, "start is invalid");
  if (!space.is_valid(goal)) throw Error(ErrorCode::InvalidQuery, "goal is invalid");

  PlanOutcome out;
  if (start == goal) {
    out.found = true;
    out.path = {start};
    return out;
  }

  Rng rng(params.seed);
  Search search{space, params};
  Tree from_start(space.dimension), from_goal(space.dimension);
  from_start.add(start, -1);
  from_goal.add(goal, -1);
  Tree* a = &from_start;
  Tree* b = &from_goal;
  Resolution half{params.resolution.translation / 2, params.resolution.rotation / 2};

  Config sample(space.dimension);
  while (!search.exhausted()) {
    if (rng.uniform() < params.goal_bias) {
      sample = b->node(0);
    } else {
      for (int i = 0; i < space.dimension; ++i) {
        sample[i] = rng.uniform(space.lower[i], space.upper[i]);
      }
    }
    int added = -1;
    if (search.extend(*a, sample, added) != Extend::Trapped) {
      const Config target = a->node(added);
      int reached = -1;
      Extend status = Extend::Advanced;
      while (status == Extend::Advanced && !search.exhausted()) {
        status = search.extend(*b, target, reached);
      }
      if (status == Extend::Reached) {
        Tree* ta = a;
        Tree* tb = b;
        std::vector<int> head = branch(*ta, added);
        std::vector<int> tail = branch(*tb, reached);
        if (a != &from_start) {
          std::swap(head, tail);
          std::swap(ta, tb);
        }
        // head runs start root -> meeting node, tail meeting node -> goal root
        std::reverse(head.begin(), head.end());
        // first edge failing the finer pass, as (tree, child id)
        Tree* bad_tree = nullptr;
        int bad_child = -1;
        for (std::size_t i = 0; i + 1 < head.size() && !bad_tree; ++i) {
          if (!check_motion(space, ta->node(head[i]), ta->node(head[i + 1]), half)) {
            bad_tree = ta;
            bad_child = head[i + 1];
          }
        }
        for (std::size_t i = 0; i + 1 < tail.size() && !bad_tree; ++i) {
          if (!check_motion(space, tb->node(tail[i]), tb->node(tail[i + 1]), half)) {
            bad_tree = tb;
            bad_child = tail[i];
          }
        }
        if (!bad_tree) {
          out.found = true;
          for (int id : head) out.path.push_back(ta->node(id));
          for (std::size_t i = 1; i < tail.size(); ++i) out.path.push_back(tb->node(tail[i]));
          out.states_attempted = search.attempted;
          return out;
        }
        bad_tree->prune(bad_child);
        // the finer pass found an invalid configuration; it counts as attempted
        if (!search.exhausted()) ++search.attempted;
      }
    }
    std::swap(a, b);
  }
  out.states_attempted = search.attempted;
  return out;
}

}  // namespace partforge::planner
