#include "plalam/envs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include "plalam/types.hpp"

namespace plalam::envs {

namespace {

constexpr double kContactEps = 1e-6;

// Entry parameter of the segment p -> p+d into the wall box, if any.
std::optional<double> segment_entry(const Eigen::Vector2d& p, const Eigen::Vector2d& d,
                                    const Wall& wall) {
  double t0 = 0.0, t1 = 1.0;
  for (int ax = 0; ax < 2; ++ax) {
    if (d[ax] == 0.0) {
      if (p[ax] < wall.lo[ax] || p[ax] > wall.hi[ax]) return std::nullopt;
    } else {
      double ta = (wall.lo[ax] - p[ax]) / d[ax];
      double tb = (wall.hi[ax] - p[ax]) / d[ax];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return std::nullopt;
    }
  }
  return t0;
}

}  // namespace

const Goal& NavWorld::primary_goal() const {
  if (goals.empty()) throw ConfigError("nav world has no goals");
  for (const auto& g : goals)
    if (g.kind == GoalKind::only || g.kind == GoalKind::far) return g;
  return goals.front();
}

Eigen::Vector2d nav_step(const NavWorld& world, const Eigen::Vector2d& pos,
                         Eigen::Vector2d action) {
  double norm = action.norm();
  if (norm > world.step_size && norm > 0.0) action *= world.step_size / norm;
  norm = action.norm();
  if (norm < 1e-15) return pos;

  double t_hit = 2.0;
  for (const auto& wall : world.walls) {
    auto t = segment_entry(pos, action, wall);
    if (t && *t < t_hit) t_hit = *t;
  }
  if (t_hit > 1.0) return pos + action;
  double t_stop = std::max(0.0, t_hit - kContactEps / norm);
  return pos + t_stop * action;
}

double nav_reward(const NavWorld& world, const Trajectory& traj) {
  const Eigen::Vector2d final_pos =
      traj.positions.empty() ? world.start : traj.positions.back();
  if (world.reward == RewardKind::reach) {
    if (!traj.reached)
      return -(final_pos - world.primary_goal().pos).norm();
    return std::max(0.8, 1.0 - 0.2 * static_cast<double>(traj.steps_used) /
                              world.horizon);
  }
  double closest = std::numeric_limits<double>::infinity();
  double far_dist = std::numeric_limits<double>::infinity();
  for (const auto& g : world.goals) {
    double dist = (final_pos - g.pos).norm();
    closest = std::min(closest, dist);
    if (g.kind == GoalKind::far) far_dist = dist;
  }
  return -closest + (far_dist < 1.0 ? 1.0 : 0.0);
}

Trajectory simulate(const NavWorld& world, const Eigen::VectorXd& x) {
  if (x.size() != 2 * world.horizon)
    throw OracleError("trajectory dimension must be 2 * horizon");
  Trajectory traj;
  traj.positions.reserve(world.horizon);
  Eigen::Vector2d pos = world.start;
  traj.steps_used = world.horizon;
  const Eigen::Vector2d goal = world.primary_goal().pos;
  bool frozen = false;
  for (int t = 0; t < world.horizon; ++t) {
    if (!frozen) {
      Eigen::Vector2d a(std::clamp(x[2 * t], -1.0, 1.0),
                        std::clamp(x[2 * t + 1], -1.0, 1.0));
      pos = nav_step(world, pos, a * world.step_size);
      if (world.terminate_on_goal && (pos - goal).norm() <= world.goal_radius) {
        traj.reached = true;
        traj.steps_used = t + 1;
        frozen = true;
      }
    }
    traj.positions.push_back(pos);
  }
  traj.value = nav_reward(world, traj);
  return traj;
}

namespace {

// Room grid geometry shared by the maze builder: room (r, c) interior is
// [c*pitch, c*pitch+3] x [r*pitch, r*pitch+3] with pitch 3.25.
constexpr double kMazeRoom = 3.0;
constexpr double kMazeWall = 0.25;
constexpr double kMazePitch = kMazeRoom + kMazeWall;
constexpr int kMazeGrid = 3;

Eigen::Vector2d maze_room_center(int room) {
  int r = room / kMazeGrid, c = room % kMazeGrid;
  return {c * kMazePitch + kMazeRoom / 2, r * kMazePitch + kMazeRoom / 2};
}

void add_boundary(NavWorld& w, double thickness = 0.5) {
  const Eigen::Vector2d lo = w.domain_lo, hi = w.domain_hi;
  w.walls.push_back({{lo.x() - thickness, lo.y() - thickness},
                     {hi.x() + thickness, lo.y()}});
  w.walls.push_back({{lo.x() - thickness, hi.y()},
                     {hi.x() + thickness, hi.y() + thickness}});
  w.walls.push_back({{lo.x() - thickness, lo.y()}, {lo.x(), hi.y()}});
  w.walls.push_back({{hi.x(), lo.y()}, {hi.x() + thickness, hi.y()}});
}

}  // namespace

NavWorld make_maze_s3(SplitRng& rng) {
  NavWorld w;
  w.name = "maze_s3";
  w.step_size = 0.3;
  w.horizon = 216;
  w.domain_lo = {0.0, 0.0};
  const double extent = kMazeGrid * kMazePitch - kMazeWall;  // 9.5
  w.domain_hi = {extent, extent};

  // Recursive backtracking over the 3x3 room grid from room 0 (top left).
  std::vector<bool> visited(kMazeGrid * kMazeGrid, false);
  std::vector<int> stack = {0}, order = {0};
  visited[0] = true;
  std::set<std::pair<int, int>> open_edges;
  while (!stack.empty()) {
    int cur = stack.back();
    int r = cur / kMazeGrid, c = cur % kMazeGrid;
    int candidates[4];
    int n_cand = 0;
    const int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      int nr = r + dr[k], nc = c + dc[k];
      if (nr < 0 || nr >= kMazeGrid || nc < 0 || nc >= kMazeGrid) continue;
      int nb = nr * kMazeGrid + nc;
      if (!visited[nb]) candidates[n_cand++] = nb;
    }
    if (n_cand == 0) {
      stack.pop_back();
      continue;
    }
    int nb = candidates[rng.uniform_int(n_cand)];
    visited[nb] = true;
    open_edges.insert({std::min(cur, nb), std::max(cur, nb)});
    stack.push_back(nb);
    order.push_back(nb);
  }

  // Closed inter-room slots become walls; the four slot crossings are always
  // solid posts.
  for (int r = 0; r < kMazeGrid; ++r)
    for (int c = 0; c + 1 < kMazeGrid; ++c) {
      int a = r * kMazeGrid + c, b = a + 1;
      if (!open_edges.count({a, b}))
        w.walls.push_back({{c * kMazePitch + kMazeRoom, r * kMazePitch},
                           {(c + 1) * kMazePitch, r * kMazePitch + kMazeRoom}});
    }
  for (int r = 0; r + 1 < kMazeGrid; ++r)
    for (int c = 0; c < kMazeGrid; ++c) {
      int a = r * kMazeGrid + c, b = a + kMazeGrid;
      if (!open_edges.count({a, b}))
        w.walls.push_back({{c * kMazePitch, r * kMazePitch + kMazeRoom},
                           {c * kMazePitch + kMazeRoom, (r + 1) * kMazePitch}});
    }
  for (int r = 0; r + 1 < kMazeGrid; ++r)
    for (int c = 0; c + 1 < kMazeGrid; ++c)
      w.walls.push_back({{c * kMazePitch + kMazeRoom, r * kMazePitch + kMazeRoom},
                         {(c + 1) * kMazePitch, (r + 1) * kMazePitch}});
  add_boundary(w);

  w.start = maze_room_center(0);
  w.goals = {{maze_room_center(order.back()), GoalKind::only}};
  return w;
}

NavWorld make_four_rooms(SplitRng& rng) {
  NavWorld w;
  w.name = "four_rooms";
  w.step_size = 0.2;
  w.horizon = 250;
  w.domain_lo = {0.0, 0.0};
  w.domain_hi = {14.0, 14.0};
  // Cross-shaped obstacle leaves four 6x6 corner rooms joined by width-2
  // corridors along the outer edges.
  w.walls.push_back({{2.0, 6.0}, {12.0, 8.0}});
  w.walls.push_back({{6.0, 2.0}, {8.0, 12.0}});
  add_boundary(w);

  // Random free-space start with a 0.5 margin; the goal mirrors it through
  // the center, which is free space again by symmetry.
  const double margin = 0.5;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Eigen::Vector2d p(margin + rng.uniform() * (14.0 - 2 * margin),
                      margin + rng.uniform() * (14.0 - 2 * margin));
    bool clear = true;
    for (const auto& wall : w.walls) {
      Wall inflated{wall.lo - Eigen::Vector2d(margin, margin),
                    wall.hi + Eigen::Vector2d(margin, margin)};
      if (inflated.inside(p)) {
        clear = false;
        break;
      }
    }
    if (!clear) continue;
    w.start = p;
    w.goals = {{Eigen::Vector2d(14.0, 14.0) - p, GoalKind::only}};
    return w;
  }
  throw ConfigError("four_rooms: failed to place start");
}

NavWorld make_select_obj(SplitRng& rng) {
  NavWorld w;
  w.name = "select_obj";
  w.step_size = 0.05;
  w.horizon = 200;
  w.terminate_on_goal = false;
  w.reward = RewardKind::select;
  w.domain_lo = {0.0, 0.0};
  w.domain_hi = {12.0, 12.0};
  add_boundary(w);
  w.start = {6.0, 6.0};

  double a1 = 2.0 * M_PI * rng.uniform();
  double d1 = 4.0 + 0.5 * rng.uniform();
  Eigen::Vector2d near_goal =
      w.start + d1 * Eigen::Vector2d(std::cos(a1), std::sin(a1));
  for (int attempt = 0; attempt < 10000; ++attempt) {
    double a2 = 2.0 * M_PI * rng.uniform();
    double d2 = 5.0 + 0.5 * rng.uniform();
    Eigen::Vector2d far_goal =
        w.start + d2 * Eigen::Vector2d(std::cos(a2), std::sin(a2));
    double spacing = (near_goal - far_goal).norm();
    if (spacing < 3.0 || spacing > 4.0) continue;
    w.goals = {{near_goal, GoalKind::near}, {far_goal, GoalKind::far}};
    return w;
  }
  throw ConfigError("select_obj: failed to place goals");
}

nlohmann::json nav_world_to_json(const NavWorld& world) {
  nlohmann::json j;
  j["name"] = world.name;
  j["step_size"] = world.step_size;
  j["horizon"] = world.horizon;
  j["goal_radius"] = world.goal_radius;
  j["terminate_on_goal"] = world.terminate_on_goal;
  j["reward"] = world.reward == RewardKind::reach ? "reach" : "select";
  j["start"] = {world.start.x(), world.start.y()};
  j["domain"] = {{"lo", {world.domain_lo.x(), world.domain_lo.y()}},
                 {"hi", {world.domain_hi.x(), world.domain_hi.y()}}};
  j["walls"] = nlohmann::json::array();
  for (const auto& wall : world.walls)
    j["walls"].push_back({{"lo", {wall.lo.x(), wall.lo.y()}},
                          {"hi", {wall.hi.x(), wall.hi.y()}}});
  j["goals"] = nlohmann::json::array();
  for (const auto& g : world.goals) {
    const char* kind = g.kind == GoalKind::only ? "only"
                       : g.kind == GoalKind::near ? "near"
                                                  : "far";
    j["goals"].push_back({{"pos", {g.pos.x(), g.pos.y()}}, {"kind", kind}});
  }
  return j;
}

SeqOrderWorld make_seq_order(SplitRng& rng) {
  SeqOrderWorld w;
  const double payoffs[3] = {10.0, 6.0, 4.0};
  for (double payoff : payoffs) {
    Chain chain;
    chain.payoff = payoff;
    int len = 2 + static_cast<int>(rng.uniform_int(3));
    while (static_cast<int>(chain.actions.size()) < len) {
      int a = static_cast<int>(rng.uniform_int(w.n_actions));
      if (std::find(chain.actions.begin(), chain.actions.end(), a) ==
          chain.actions.end())
        chain.actions.push_back(a);
    }
    w.chains.push_back(std::move(chain));
  }
  return w;
}

double seqorder_reward(const SeqOrderWorld& world, const std::vector<int>& actions) {
  for (int a : actions)
    if (a < 0 || a >= world.n_actions)
      throw OracleError("seqorder: action out of range");

  std::vector<bool> contributing(actions.size(), false);
  double total = 0.0;
  for (const auto& chain : world.chains) {
    // Greedy leftmost embedding of the chain as a subsequence.
    std::vector<size_t> used;
    size_t j = 0;
    for (size_t i = 0; i < actions.size() && j < chain.actions.size(); ++i) {
      if (actions[i] == chain.actions[j]) {
        used.push_back(i);
        ++j;
      }
    }
    if (j == chain.actions.size()) {
      total += chain.payoff;
      for (size_t i : used) contributing[i] = true;
    }
  }
  int idle = 0;
  for (bool c : contributing)
    if (!c) ++idle;
  return total - world.base_cost * idle;
}

std::vector<int> decode_actions(const SeqOrderWorld& world, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<long>(world.horizon) * world.n_actions)
    throw OracleError("seqorder: x dimension must be horizon * n_actions");
  std::vector<int> actions(world.horizon);
  for (int t = 0; t < world.horizon; ++t) {
    int best = 0;
    for (int a = 1; a < world.n_actions; ++a)
      if (x[t * world.n_actions + a] > x[t * world.n_actions + best]) best = a;
    actions[t] = best;
  }
  return actions;
}

std::vector<Eigen::VectorXd> seqorder_states(const SeqOrderWorld& world,
                                             const std::vector<int>& actions) {
  std::vector<Eigen::VectorXd> states;
  states.reserve(actions.size());
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(world.n_actions);
  for (int a : actions) {
    hist[a] += 1.0;
    states.push_back(hist);
  }
  return states;
}

nlohmann::json seq_order_to_json(const SeqOrderWorld& world) {
  nlohmann::json j;
  j["name"] = "seq_order";
  j["n_actions"] = world.n_actions;
  j["horizon"] = world.horizon;
  j["base_cost"] = world.base_cost;
  j["chains"] = nlohmann::json::array();
  for (const auto& chain : world.chains)
    j["chains"].push_back({{"actions", chain.actions}, {"payoff", chain.payoff}});
  return j;
}

double deceptive_twin(const Eigen::VectorXd& x, const Eigen::Vector2d& near_pt,
                      const Eigen::Vector2d& far_pt) {
  Eigen::Vector2d p(x[0], x[1]);
  double d_near = (p - near_pt).norm();
  double d_far = (p - far_pt).norm();
  return -std::min(d_near, d_far) + (d_far < 0.5 ? 1.0 : 0.0);
}

double neg_rastrigin(const Eigen::VectorXd& x) {
  double s = 10.0 * x.size();
  for (int i = 0; i < x.size(); ++i)
    s += x[i] * x[i] - 10.0 * std::cos(2.0 * M_PI * x[i]);
  return -s;
}

double neg_ackley(const Eigen::VectorXd& x) {
  const double n = static_cast<double>(x.size());
  double sq = x.squaredNorm() / n;
  double cs = 0.0;
  for (int i = 0; i < x.size(); ++i) cs += std::cos(2.0 * M_PI * x[i]);
  cs /= n;
  double v = -20.0 * std::exp(-0.2 * std::sqrt(sq)) - std::exp(cs) + 20.0 + M_E;
  return -v;
}

std::vector<Eigen::VectorXd> Environment::rollout_states(const Eigen::VectorXd& x) const {
  return {x};
}

namespace {

class NavEnvironment final : public Environment {
 public:
  explicit NavEnvironment(NavWorld world) : world_(std::move(world)) {}

  const std::string& name() const override { return world_.name; }
  int dim() const override { return 2 * world_.horizon; }
  std::optional<BoxBounds> bounds() const override {
    return BoxBounds::cube(dim(), -1.0, 1.0);
  }
  double evaluate(const Eigen::VectorXd& x) const override {
    return simulate(world_, x).value;
  }
  std::vector<Eigen::VectorXd> rollout_states(const Eigen::VectorXd& x) const override {
    Trajectory traj = simulate(world_, x);
    std::vector<Eigen::VectorXd> states;
    states.reserve(traj.positions.size());
    for (const auto& p : traj.positions)
      states.push_back(Eigen::Vector2d(p));
    return states;
  }
  bool success(double value) const override {
    // reach worlds: any on-time arrival scores at least 0.8; select world:
    // positive value means the far-goal bonus was collected.
    return world_.reward == RewardKind::reach ? value >= 0.8 : value > 0.0;
  }
  int default_snapshot_stride() const override {
    return std::max(1, world_.horizon / 8);
  }
  nlohmann::json describe() const override { return nav_world_to_json(world_); }

  const NavWorld& world() const { return world_; }

 private:
  NavWorld world_;
};

class SeqOrderEnvironment final : public Environment {
 public:
  explicit SeqOrderEnvironment(SeqOrderWorld world)
      : world_(std::move(world)), name_("seq_order") {}

  const std::string& name() const override { return name_; }
  int dim() const override { return world_.horizon * world_.n_actions; }
  std::optional<BoxBounds> bounds() const override {
    return BoxBounds::cube(dim(), 0.0, 1.0);
  }
  double evaluate(const Eigen::VectorXd& x) const override {
    return seqorder_reward(world_, decode_actions(world_, x));
  }
  std::vector<Eigen::VectorXd> rollout_states(const Eigen::VectorXd& x) const override {
    return seqorder_states(world_, decode_actions(world_, x));
  }
  bool success(double value) const override { return value > 0.0; }
  int default_snapshot_stride() const override {
    return std::max(1, world_.horizon / 8);
  }
  nlohmann::json describe() const override { return seq_order_to_json(world_); }

 private:
  SeqOrderWorld world_;
  std::string name_;
};

class TwinEnvironment final : public Environment {
 public:
  TwinEnvironment(Eigen::Vector2d near_pt, Eigen::Vector2d far_pt)
      : near_(std::move(near_pt)), far_(std::move(far_pt)), name_("deceptive_twin") {}

  const std::string& name() const override { return name_; }
  int dim() const override { return 2; }
  std::optional<BoxBounds> bounds() const override {
    return BoxBounds::cube(2, -6.0, 6.0);
  }
  double evaluate(const Eigen::VectorXd& x) const override {
    return deceptive_twin(x, near_, far_);
  }
  bool success(double value) const override { return value >= 0.5; }
  nlohmann::json describe() const override {
    return {{"name", name_},
            {"near", {near_.x(), near_.y()}},
            {"far", {far_.x(), far_.y()}}};
  }

 private:
  Eigen::Vector2d near_, far_;
  std::string name_;
};

class AnalyticEnvironment final : public Environment {
 public:
  AnalyticEnvironment(std::string name, int dim, double half_width,
                      double (*fn)(const Eigen::VectorXd&))
      : name_(std::move(name)), dim_(dim), half_width_(half_width), fn_(fn) {}

  const std::string& name() const override { return name_; }
  int dim() const override { return dim_; }
  std::optional<BoxBounds> bounds() const override {
    return BoxBounds::cube(dim_, -half_width_, half_width_);
  }
  double evaluate(const Eigen::VectorXd& x) const override { return fn_(x); }
  bool success(double value) const override { return value > -0.1; }
  nlohmann::json describe() const override {
    return {{"name", name_}, {"dim", dim_}, {"half_width", half_width_}};
  }

 private:
  std::string name_;
  int dim_;
  double half_width_;
  double (*fn_)(const Eigen::VectorXd&);
};

}  // namespace

TrajectoryEncoder::TrajectoryEncoder(const Environment& env, int stride)
    : env_(env),
      stride_(stride > 0 ? stride : env.default_snapshot_stride()) {
  Eigen::VectorXd probe = Eigen::VectorXd::Zero(env_.dim());
  if (auto b = env_.bounds()) probe = 0.5 * (b->lo + b->hi);
  out_dim_ = static_cast<int>(
      latent::snapshot_encode(env_.rollout_states(probe), stride_).size());
}

Eigen::VectorXd TrajectoryEncoder::encode(const Eigen::VectorXd& x) const {
  return latent::snapshot_encode(env_.rollout_states(x), stride_);
}

std::unique_ptr<Environment> make_env(const std::string& name, SplitRng& rng,
                                      int dim) {
  if (name == "maze_s3")
    return std::make_unique<NavEnvironment>(make_maze_s3(rng));
  if (name == "four_rooms")
    return std::make_unique<NavEnvironment>(make_four_rooms(rng));
  if (name == "select_obj")
    return std::make_unique<NavEnvironment>(make_select_obj(rng));
  if (name == "seq_order")
    return std::make_unique<SeqOrderEnvironment>(make_seq_order(rng));
  if (name == "deceptive_twin") {
    // Attractor pair rotated by a seed-dependent angle about the origin.
    double theta = 2.0 * M_PI * rng.uniform();
    Eigen::Rotation2D<double> rot(theta);
    return std::make_unique<TwinEnvironment>(rot * Eigen::Vector2d(-3.0, 0.0),
                                             rot * Eigen::Vector2d(3.0, 0.0));
  }
  if (name == "rastrigin")
    return std::make_unique<AnalyticEnvironment>("rastrigin", dim, 5.12,
                                                 &neg_rastrigin);
  if (name == "ackley")
    return std::make_unique<AnalyticEnvironment>("ackley", dim, 32.768,
                                                 &neg_ackley);
  throw ConfigError("unknown environment: " + name);
}

std::vector<std::string> env_names() {
  return {"maze_s3",   "four_rooms",     "select_obj", "seq_order",
          "deceptive_twin", "rastrigin", "ackley"};
}

}  // namespace plalam::envs
