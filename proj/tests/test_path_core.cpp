#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "maxrep/path.hpp"

using namespace maxrep;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CadlagPath steps(double init, double horizon,
                 std::vector<std::pair<double, double>> ev,
                 TailMode tail = TailMode::Truncated) {
  PathBuilder b(init, horizon, tail);
  for (auto& [t, v] : ev) b.append(t, v, EventKind::Jump);
  return std::move(b).build();
}

CadlagPath grid_ramp(double horizon, double dt, double slope) {
  PathBuilder b(0.0, horizon, TailMode::Truncated);
  for (double t = dt; t <= horizon + 1e-15; t += dt)
    b.append(t, slope * t, EventKind::Grid);
  return std::move(b).build();
}

}  // namespace

TEST_CASE("builder and point evaluation") {
  CadlagPath p = steps(1.0, 10.0, {{1.0, 3.0}, {2.0, 2.0}});
  CHECK(p.initial_value() == 1.0);
  CHECK(p.value_at(0.0) == 1.0);
  CHECK(p.value_at(1.0) == 3.0);       // right continuous
  CHECK(p.left_limit_at(1.0) == 1.0);
  CHECK(p.jump_at(1.0) == 2.0);
  CHECK(p.jump_at(1.5) == 0.0);
  CHECK(p.value_at(5.0) == 2.0);
  CHECK(p.final_value() == 2.0);
  CHECK(p.max_value() == 3.0);
  REQUIRE(p.event_at(2.0) != nullptr);
  CHECK(p.event_at(2.0)->value == 2.0);
  CHECK(p.event_at(1.5) == nullptr);
}

TEST_CASE("builder keeps event times strictly increasing") {
  PathBuilder b(0.0, 5.0, TailMode::Truncated);
  b.append(1.0, 1.0, EventKind::Jump);
  b.append(1.0, 2.0, EventKind::Jump);  // nudged one ulp forward
  CadlagPath p = std::move(b).build();
  REQUIRE(p.size() == 2);
  CHECK(p.events()[1].time > p.events()[0].time);
  CHECK(p.events()[1].time == std::nextafter(1.0, kInf));
}

TEST_CASE("append_if_changed drops bitwise no-ops") {
  PathBuilder b(1.0, 5.0, TailMode::Truncated);
  b.append_if_changed(1.0, 1.0, EventKind::Grid);
  b.append_if_changed(2.0, 1.5, EventKind::Grid);
  b.append_if_changed(3.0, 1.5, EventKind::Grid);
  CadlagPath p = std::move(b).build();
  CHECK(p.size() == 1);
  CHECK(p.events()[0].time == 2.0);
}

TEST_CASE("interp reads grid segments as linear motion") {
  PathBuilder b(0.0, 4.0, TailMode::Truncated);
  b.append(2.0, 1.0, EventKind::Grid);
  b.append(3.0, 1.0, EventKind::Jump);  // placeholder jump, no move
  b.append(3.5, 2.0, EventKind::Jump);
  CadlagPath p = std::move(b).build();
  CHECK(p.interp_value_at(1.0) == doctest::Approx(0.5));
  CHECK(p.interp_value_at(2.0) == 1.0);
  CHECK(p.value_at(1.0) == 0.0);             // step reading
  CHECK(p.interp_value_at(3.25) == 1.0);     // jumps still step
  CHECK(p.interp_value_at(3.5) == 2.0);
}

TEST_CASE("increments are deltas against the previous value") {
  CadlagPath p = steps(1.0, 10.0, {{1.0, 3.0}, {2.0, 2.0}});
  auto inc = increments(p);
  REQUIRE(inc.size() == 2);
  CHECK(inc[0].delta == 2.0);
  CHECK(inc[1].delta == -1.0);
  CHECK(inc[1].kind == EventKind::Jump);
}

TEST_CASE("running max of a step path") {
  // 1 -> 3 at t=1 -> 2 at t=2 gives 1 on [0,1), 3 from 1 on
  CadlagPath p = steps(1.0, 10.0, {{1.0, 3.0}, {2.0, 2.0}});
  CadlagPath m = running_max(p);
  CHECK(m.initial_value() == 1.0);
  CHECK(m.value_at(0.5) == 1.0);
  CHECK(m.value_at(1.0) == 3.0);
  CHECK(m.value_at(9.0) == 3.0);
  for (const auto& e : m.events()) CHECK(p.event_at(e.time) != nullptr);
}

TEST_CASE("running max of a constant is itself") {
  CadlagPath c = steps(2.5, 4.0, {});
  CadlagPath m = running_max(c);
  CHECK(m.size() == 0);
  CHECK(m.value_at(3.0) == 2.5);
}

TEST_CASE("running max of a doubling-decay sample by event enumeration") {
  // value decays as e^{-t} between doublings at 0.5 and 1.2
  PathBuilder b(1.0, 2.0, TailMode::Truncated);
  int jumps = 0;
  double factor = 1.0;
  for (int k = 1; k <= 20; ++k) {
    double t = k * 0.1;
    if ((std::abs(t - 0.5) < 1e-9 || std::abs(t - 1.2) < 1e-9)) {
      factor *= 2.0;
      ++jumps;
      b.append(t, factor * std::exp(-t), EventKind::Jump);
    } else {
      b.append(t, factor * std::exp(-t), EventKind::Grid);
    }
  }
  CadlagPath w = std::move(b).build();
  REQUIRE(jumps == 2);
  CadlagPath m = running_max(w);
  double best = w.initial_value();
  for (const auto& e : w.events()) best = std::max(best, e.value);
  CHECK(m.final_value() == best);
  CHECK(m.final_value() == doctest::Approx(2.0 * std::exp(-0.5)));
}

TEST_CASE("support check accepts dU* on the max carrier") {
  // drawdown shape: exponential rise, kill at S = 1
  PathBuilder b(1.0, 3.0, TailMode::Absorbed);
  for (double t = 0.125; t < 1.0; t += 0.125)
    b.append(t, std::exp(t), EventKind::Grid);
  b.append(1.0, 0.0, EventKind::Jump);
  CadlagPath u = std::move(b).build();
  CadlagPath us = running_max(u);
  SupportReport rep = support_check(us, equals_carrier(u, us));
  CHECK(rep.ok(0.0));
  CHECK(rep.escaped_mass == 0.0);
  CHECK(rep.total_mass > 0.0);
}

TEST_CASE("support check flags a carrier that never holds") {
  CadlagPath ramp = grid_ramp(1.0, 0.25, 1.0);
  TimePredicate never{[](double) { return false; },
                      [](double) { return false; }};
  SupportReport rep = support_check(ramp, never);
  CHECK_FALSE(rep.ok(0.0));
  CHECK(rep.escaped_mass == doctest::Approx(1.0));
  REQUIRE(rep.first_escape.has_value());
  CHECK(*rep.first_escape == 0.25);
}

TEST_CASE("support check flags an atom outside the carrier") {
  double S = 0.75;
  CadlagPath ind = steps(0.0, 2.0, {{S, 1.0}});
  TimePredicate before_s{[S](double t) { return t < S; },
                         [S](double t) { return t < S; }};
  SupportReport rep = support_check(ind, before_s);
  CHECK_FALSE(rep.ok(0.0));
  CHECK(rep.escaped_mass == 1.0);
  CHECK(*rep.first_escape == S);
}

TEST_CASE("level carrier tracks exact hits") {
  CadlagPath z = steps(1.0, 3.0, {{1.0, 0.5}, {2.0, 1.0}});
  TimePredicate at1 = level_carrier(z, 1.0);
  CHECK(at1.at(0.5));
  CHECK_FALSE(at1.at(1.5));
  CHECK(at1.at(2.5));
  CHECK(at1.before(1.0));   // left limit is 1
  CHECK_FALSE(at1.before(2.0));
}

TEST_CASE("closed time set merges touching intervals") {
  auto s = ClosedTimeSet::from_intervals(
      {{5.0, 5.0}, {1.0, 2.0}, {2.0, 3.0}}, 10.0);
  REQUIRE(s.components().size() == 2);
  CHECK(s.components()[0] == std::pair<double, double>{1.0, 3.0});
  CHECK(s.components()[1] == std::pair<double, double>{5.0, 5.0});
  CHECK(s.contains(2.5));
  CHECK(s.contains(5.0));
  CHECK_FALSE(s.contains(4.0));
}

TEST_CASE("sojourn query outside, inside, and past the set") {
  auto s = ClosedTimeSet::from_intervals({{0.0, 0.0}, {1.0, 2.0}}, 10.0);

  SojournTimes a = sojourn_query(s, 0.5);
  CHECK(*a.last_visit == 0.0);
  CHECK(*a.last_strict == 0.0);
  CHECK(a.next_entrance == 1.0);
  CHECK(a.next_or_now == 1.0);
  CHECK_FALSE(a.in_set);
  CHECK_FALSE(a.immediate);

  // interior point: the future entrance is immediate and flagged
  SojournTimes b = sojourn_query(s, 1.5);
  CHECK(*b.last_visit == 1.5);
  CHECK(*b.last_strict == 1.5);
  CHECK(b.next_entrance == 1.5);
  CHECK(b.immediate);
  CHECK(b.in_set);

  SojournTimes c = sojourn_query(s, 2.5);
  CHECK(*c.last_visit == 2.0);
  CHECK(*c.last_strict == 2.0);
  CHECK(c.next_entrance == kInf);
  CHECK(c.next_or_now == kInf);
  CHECK_FALSE(c.immediate);
}

TEST_CASE("skorokhod solve on a falling ramp") {
  CadlagPath x = grid_ramp(1.0, 0.125, -1.0);
  CadlagPath y = skorokhod_solve(x);
  for (double t = 0.125; t <= 1.0; t += 0.125)
    CHECK(y.value_at(t) == doctest::Approx(t));
  CHECK(verify_skorokhod(x, y).ok());
}

TEST_CASE("skorokhod solve keeps nonnegative paths untouched") {
  CadlagPath x = steps(1.0, 5.0, {{1.0, 0.5}, {2.0, 3.0}});
  CadlagPath y = skorokhod_solve(x);
  CHECK(y.initial_value() == 0.0);
  CHECK(y.final_value() == 0.0);
  CHECK(y.max_value() == 0.0);
  CHECK(verify_skorokhod(x, y).ok());
}

TEST_CASE("skorokhod solve pushes exactly at the binding time") {
  // 1 -> -2 (t=1) -> 0.5 (t=2): Y = 2 from t=1, X+Y = (1, 0, 2.5)
  CadlagPath x = steps(1.0, 5.0, {{1.0, -2.0}, {2.0, 0.5}});
  CadlagPath y = skorokhod_solve(x);
  CHECK(y.value_at(0.5) == 0.0);
  CHECK(y.value_at(1.0) == 2.0);
  CHECK(y.value_at(4.0) == 2.0);
  CHECK(x.value_at(1.0) + y.value_at(1.0) == 0.0);
  CHECK(x.value_at(2.0) + y.value_at(2.0) == 2.5);
  CHECK(verify_skorokhod(x, y).ok());
}

TEST_CASE("skorokhod verifier rejects an oversized pusher") {
  CadlagPath x = grid_ramp(1.0, 0.25, -1.0);
  CadlagPath y2 = grid_ramp(1.0, 0.25, 2.0);
  SkorokhodReport rep = verify_skorokhod(x, y2);
  CHECK_FALSE(rep.ok());
  CHECK(rep.nondecreasing_ok);
  CHECK(rep.nonneg_ok);
  CHECK_FALSE(rep.support_ok);  // dY charges {X+Y > 0}
}

TEST_CASE("csv round trip preserves the event list bitwise") {
  PathBuilder b(1.0, 3.0, TailMode::Absorbed);
  b.append(0.3333333333333333, std::exp(0.3), EventKind::Grid);
  b.append(1.0, 0.125, EventKind::Jump);
  CadlagPath p = std::move(b).build();

  std::ostringstream os;
  write_csv(os, p);
  std::istringstream is(os.str());
  CadlagPath q = read_csv(is, p.horizon(), p.tail());
  CHECK(p.same_events(q));
  CHECK(q.events()[1].kind == EventKind::Jump);
}

TEST_CASE("same_events is bitwise") {
  CadlagPath a = steps(1.0, 5.0, {{1.0, 2.0}});
  CadlagPath b = steps(1.0, 5.0, {{1.0, 2.0}});
  CadlagPath c = steps(1.0, 5.0, {{1.0, 2.0 + 1e-15}});
  CHECK(a.same_events(b));
  CHECK_FALSE(a.same_events(c));
}
