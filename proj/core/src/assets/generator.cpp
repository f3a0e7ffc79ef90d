#include "partforge/assets/generator.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "partforge/common/error.hpp"
#include "partforge/common/rng.hpp"
#include "partforge/common/text.hpp"
#include "partforge/geom/collision.hpp"

namespace partforge::assets {

namespace {

constexpr double kGap = 0.002;       // designed gap between mated faces
constexpr double kClearance = 0.02;  // minimum gap between unmated parts

enum class Layout {
  FourLegs,
  FourRoundLegs,
  FourLegsWide,
  ThreeRoundLegs,
  TwoPanels,
  BackPanel,          // 6
  BackPanelStretcher, // 7
  PostsRail,          // 8
  StretchersPanel,    // 8
  PostsRailSlat,      // 9
  PostsRailSlats,     // 10
  PostsRailSlatStretchers,   // 11
  PostsRailSlatsStretchers,  // 12
};

struct HardShape {
  Layout layout;
  int parts;
  int seat_connections;
  int max_connections;
};

constexpr HardShape kHardShapes[] = {
    {Layout::BackPanel, 6, 5, 5},
    {Layout::BackPanelStretcher, 7, 5, 5},
    {Layout::PostsRail, 8, 6, 6},
    {Layout::StretchersPanel, 8, 5, 5},
    {Layout::PostsRailSlat, 9, 7, 7},
    {Layout::PostsRailSlats, 10, 8, 8},
    {Layout::PostsRailSlatStretchers, 11, 7, 7},
    {Layout::PostsRailSlatsStretchers, 12, 8, 8},
};

std::vector<HardShape> allowed_hard(const GeneratorOptions& o) {
  std::vector<HardShape> out;
  for (const HardShape& s : kHardShapes) {
    if (s.parts <= o.max_parts && s.max_connections <= o.max_connections) out.push_back(s);
  }
  return out;
}

struct Draft {
  std::vector<geom::TriMesh> meshes;
  std::vector<Vec3> centers;
  std::set<std::pair<int, int>> mates;
  std::vector<AssemblyStep> order;

  int add(geom::TriMesh mesh, const Vec3& center) {
    meshes.push_back(std::move(mesh));
    centers.push_back(center);
    return static_cast<int>(meshes.size()) - 1;
  }
  void mate(int a, int b) { mates.insert({std::min(a, b), std::max(a, b)}); }
};

geom::TriMesh box(double x, double y, double z) {
  return geom::make_box(Vec3(x / 2, y / 2, z / 2));
}

Draft draft_chair(Rng& rng, Layout layout) {
  Draft d;
  const double width = rng.uniform(0.40, 0.55);
  const double depth = rng.uniform(0.38, 0.50);
  const double thick = rng.uniform(0.03, 0.05);
  const double leg_h = rng.uniform(0.38, 0.48);
  const double inset = rng.uniform(0.02, 0.05);
  const double seat_top = leg_h + kGap + thick;

  const int seat = d.add(box(width, depth, thick), Vec3(0, 0, leg_h + kGap + thick / 2));

  const bool round = layout == Layout::FourRoundLegs || layout == Layout::ThreeRoundLegs;
  const double side = layout == Layout::FourLegsWide ? rng.uniform(0.045, 0.06)
                                                     : rng.uniform(0.03, 0.05);
  const double radius = rng.uniform(0.016, 0.025);
  const double foot = round ? 2 * radius : side;
  const double fx = width / 2 - inset - foot / 2;
  const double fy = depth / 2 - inset - foot / 2;
  const geom::TriMesh leg_mesh =
      round ? geom::make_cylinder(radius, leg_h / 2) : box(side, side, leg_h);

  std::vector<int> legs;
  auto add_leg = [&](double x, double y, const geom::TriMesh& mesh) {
    const int id = d.add(mesh, Vec3(x, y, leg_h / 2));
    d.mate(id, seat);
    d.order.push_back({id, seat, 5});
    legs.push_back(id);
  };

  if (layout == Layout::ThreeRoundLegs) {
    add_leg(-fx, -fy, leg_mesh);
    add_leg(fx, -fy, leg_mesh);
    add_leg(0, fy, leg_mesh);
    return d;
  }
  if (layout == Layout::TwoPanels) {
    const double p = rng.uniform(0.02, 0.04);
    const geom::TriMesh panel = box(p, depth - 2 * inset, leg_h);
    const double px = width / 2 - inset - p / 2;
    add_leg(-px, 0, panel);
    add_leg(px, 0, panel);
    return d;
  }
  add_leg(-fx, -fy, leg_mesh);
  add_leg(fx, -fy, leg_mesh);
  add_leg(-fx, fy, leg_mesh);
  add_leg(fx, fy, leg_mesh);

  const bool panel = layout == Layout::BackPanel || layout == Layout::BackPanelStretcher ||
                     layout == Layout::StretchersPanel;
  const bool posts = layout == Layout::PostsRail || layout == Layout::PostsRailSlat ||
                     layout == Layout::PostsRailSlats ||
                     layout == Layout::PostsRailSlatStretchers ||
                     layout == Layout::PostsRailSlatsStretchers;
  int stretchers = 0;
  if (layout == Layout::BackPanelStretcher) stretchers = 1;
  if (layout == Layout::StretchersPanel || layout == Layout::PostsRailSlatStretchers ||
      layout == Layout::PostsRailSlatsStretchers) {
    stretchers = 2;
  }
  int slats = 0;
  if (layout == Layout::PostsRailSlat || layout == Layout::PostsRailSlatStretchers) slats = 1;
  if (layout == Layout::PostsRailSlats || layout == Layout::PostsRailSlatsStretchers) slats = 2;

  if (stretchers > 0) {
    // along y, pressed against the outer faces of a front/back leg pair
    const double st = rng.uniform(0.02, 0.03);
    const double sh = rng.uniform(0.025, 0.04);
    const double hz = rng.uniform(0.25, 0.45) * leg_h;
    const double span = depth - 2 * inset;
    const geom::TriMesh mesh = box(st, span, sh);
    const double sx = width / 2 - inset + kGap + st / 2;
    for (int s = 0; s < stretchers; ++s) {
      const double sign = s == 0 ? -1.0 : 1.0;
      const int front = legs[s == 0 ? 0 : 1];
      const int back = legs[s == 0 ? 2 : 3];
      const int id = d.add(mesh, Vec3(sign * sx, 0, hz));
      d.mate(id, front);
      d.mate(id, back);
      d.order.push_back({id, front, 5});
    }
  }
  if (panel) {
    const double pt = rng.uniform(0.02, 0.03);
    const double ph = rng.uniform(0.30, 0.45);
    const double pe = rng.uniform(0.02, 0.05);
    const int id = d.add(box(width - 2 * pe, pt, ph),
                         Vec3(0, depth / 2 - pe - pt / 2, seat_top + kGap + ph / 2));
    d.mate(id, seat);
    d.order.push_back({id, seat, 4});
  }
  if (posts) {
    const double ps = rng.uniform(0.025, 0.04);
    const double ph = rng.uniform(0.35, 0.45);
    const double pe = rng.uniform(0.02, 0.04);
    const double rail_h = rng.uniform(0.03, 0.05);
    const double py = depth / 2 - pe - ps / 2;
    const double px = width / 2 - pe - ps / 2;
    const geom::TriMesh post_mesh = box(ps, ps, ph);
    std::vector<int> post_ids;
    for (double sign : {-1.0, 1.0}) {
      const int id = d.add(post_mesh, Vec3(sign * px, py, seat_top + kGap + ph / 2));
      d.mate(id, seat);
      d.order.push_back({id, seat, 4});
      post_ids.push_back(id);
    }
    std::vector<int> slat_ids;
    if (slats > 0) {
      const double sw = rng.uniform(0.03, 0.05);
      const geom::TriMesh slat_mesh = box(sw, 0.6 * ps, ph);
      const double inner = px - ps / 2;
      for (int s = 0; s < slats; ++s) {
        const double x = slats == 1 ? 0.0 : (s == 0 ? -inner / 3 : inner / 3);
        const int id = d.add(slat_mesh, Vec3(x, py, seat_top + kGap + ph / 2));
        d.mate(id, seat);
        d.order.push_back({id, seat, 4});
        slat_ids.push_back(id);
      }
    }
    const int rail = d.add(box(width - 2 * pe, ps, rail_h),
                           Vec3(0, py, seat_top + kGap + ph + kGap + rail_h / 2));
    for (int p : post_ids) d.mate(rail, p);
    for (int s : slat_ids) d.mate(rail, s);
    d.order.push_back({rail, post_ids[0], 4});
  }
  return d;
}

bool draft_is_valid(const Draft& d) {
  std::vector<geom::ConvexHull> hulls;
  for (const auto& m : d.meshes) hulls.push_back(geom::convex_hull(m));
  const int n = static_cast<int>(hulls.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double gap = geom::min_distance(hulls[i], Pose6D::translation(d.centers[i]), hulls[j],
                                            Pose6D::translation(d.centers[j]))
                             .distance;
      if (d.mates.count({i, j})) {
        if (gap <= geom::kContactTolerance || gap >= kConnectionThreshold / 2) return false;
      } else if (gap <= kClearance) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<int> hard_layout_sizes(const GeneratorOptions& options) {
  std::vector<int> out;
  for (const HardShape& s : allowed_hard(options)) out.push_back(s.parts);
  return out;
}

ChairAsset generate_chair(std::uint64_t seed, Difficulty difficulty,
                          const GeneratorOptions& options) {
  Layout layout;
  if (difficulty == Difficulty::Easy) {
    if (options.max_parts < 3) {
      throw Error(ErrorCode::GenerationFailed, "easy chairs need at least 3 parts");
    }
    static constexpr Layout kEasy[] = {Layout::FourLegs, Layout::FourRoundLegs,
                                       Layout::FourLegsWide, Layout::ThreeRoundLegs,
                                       Layout::TwoPanels};
    const int variant = static_cast<int>(seed % 5);
    layout = kEasy[variant];
    if (options.max_parts < 5 || options.max_connections < 4) {
      layout = options.max_parts >= 4 && options.max_connections >= 3 ? Layout::ThreeRoundLegs
                                                                       : Layout::TwoPanels;
    }
  } else {
    const auto shapes = allowed_hard(options);
    if (shapes.empty()) {
      throw Error(ErrorCode::GenerationFailed, "caps admit no hard layout");
    }
    layout = shapes[seed % shapes.size()].layout;
  }

  Rng rng(mix_seed(seed, 0x636861697273ULL));
  for (int attempt = 0; attempt < 100; ++attempt) {
    Draft d = draft_chair(rng, layout);
    if (!draft_is_valid(d)) continue;

    ChairAsset chair;
    chair.difficulty = difficulty;
    for (std::size_t i = 0; i < d.meshes.size(); ++i) {
      Part p;
      p.id = static_cast<int>(i);
      p.mesh = d.meshes[i];
      for (Vec3& v : p.mesh.vertices) v = v.unaryExpr([](double x) { return round_sig9(x); });
      p.hull = geom::convex_hull(p.mesh);
      chair.parts.push_back(std::move(p));
      const Vec3 c = d.centers[i].unaryExpr([](double x) { return round_sig9(x); });
      chair.gt_poses.push_back(Pose6D::translation(c));
    }
    chair.designed_mates.assign(d.mates.begin(), d.mates.end());
    chair.assembly_order = d.order;
    return chair;
  }
  throw Error(ErrorCode::GenerationFailed,
              "no valid sizing after 100 attempts for seed " + std::to_string(seed));
}

}  // namespace partforge::assets
