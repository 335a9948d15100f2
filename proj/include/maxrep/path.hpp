#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxrep {

// GRID events carry increments of continuous motion sampled at a time point;
// JUMP events carry genuine discontinuities.
enum class EventKind : std::uint8_t { Grid, Jump };

// ABSORBED: the final value persists to infinity (e.g. a payoff killed at 0).
// TRUNCATED: the tail beyond the horizon is unknown.
enum class TailMode : std::uint8_t { Truncated, Absorbed };

struct PathEvent {
  double time;
  double value;  // new value from `time` on
  EventKind kind;
};

// Right-continuous piecewise-constant carrier of a cadlag trajectory.
// Values change only at events; event times are strictly increasing and
// bounded by the horizon.
class CadlagPath {
 public:
  CadlagPath() = default;
  CadlagPath(double initial, double horizon, TailMode tail,
             std::vector<PathEvent> events);

  double initial_value() const { return initial_; }
  double horizon() const { return horizon_; }
  TailMode tail() const { return tail_; }
  const std::vector<PathEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  // Value of the last event at or before t (initial value if none).
  double value_at(double t) const;
  // Value just before t: skips an event at exactly t.
  double left_limit_at(double t) const;
  // value_at(t) - left_limit_at(t); zero when no event sits at t.
  double jump_at(double t) const;
  // Like value_at, but a Grid event is read as linear motion over the
  // segment from the previous event: the continuous interpretation of
  // sampled flow. Jump events still step.
  double interp_value_at(double t) const;

  double final_value() const;
  double max_value() const;  // over the initial value and all events
  const PathEvent* event_at(double t) const;  // exact-time lookup

  // Bitwise equality of initial value and the full event list.
  bool same_events(const CadlagPath& other) const;

 private:
  double initial_ = 0.0;
  double horizon_ = 0.0;
  TailMode tail_ = TailMode::Truncated;
  std::vector<PathEvent> events_;
  // index of first event with time > t
  std::size_t upper_index(double t) const;
};

// Incremental construction. Appending at a time not later than the last
// event nudges the time forward by one ulp so ordering stays strict;
// genuinely distinct model times should be kept distinct by the caller.
class PathBuilder {
 public:
  PathBuilder(double initial, double horizon, TailMode tail);
  PathBuilder& append(double t, double value, EventKind kind);
  // Skips the event when the value is bitwise-unchanged.
  PathBuilder& append_if_changed(double t, double value, EventKind kind);
  double last_time() const;
  double last_value() const;
  bool empty() const { return events_.empty(); }
  CadlagPath build() &&;

 private:
  double initial_;
  double horizon_;
  TailMode tail_;
  std::vector<PathEvent> events_;
};

struct Increment {
  double time;
  double delta;
  EventKind kind;
};

// Per-event increments relative to the previous value.
std::vector<Increment> increments(const CadlagPath& x);

// Running supremum; output events are a subset of input event times.
CadlagPath running_max(const CadlagPath& x);

// Membership test for a time set, with separate evaluation at t and just
// before t. Grid increments accrue over an interval, so a support check
// accepts them when the carrier holds at either end.
struct TimePredicate {
  std::function<bool(double)> at;
  std::function<bool(double)> before;
};

// {t : a(t) = b(t)} with relative tolerance (0 means exact equality).
TimePredicate equals_carrier(const CadlagPath& a, const CadlagPath& b,
                             double rel_tol = 0.0);
// {t : a(t) = level}
TimePredicate level_carrier(const CadlagPath& a, double level,
                            double rel_tol = 0.0);

struct SupportReport {
  double total_mass = 0.0;
  double escaped_mass = 0.0;
  std::optional<double> first_escape;
  bool ok(double tol = 0.0) const { return escaped_mass <= tol; }
};

// Measures how much of the increment mass of a non-decreasing path falls
// outside the carrier. Jump mass escapes when the carrier fails at the
// jump time; grid mass escapes when it fails at both ends of the segment.
SupportReport support_check(const CadlagPath& increasing,
                            const TimePredicate& carrier);

// Disjoint sorted closed intervals; single points are [a,a]; touching or
// overlapping inputs are merged by the factory.
class ClosedTimeSet {
 public:
  static ClosedTimeSet from_intervals(
      std::vector<std::pair<double, double>> raw, double horizon);
  const std::vector<std::pair<double, double>>& components() const {
    return comps_;
  }
  double horizon() const { return horizon_; }
  bool contains(double t) const;
  bool empty() const { return comps_.empty(); }

 private:
  std::vector<std::pair<double, double>> comps_;
  double horizon_ = 0.0;
};

TimePredicate set_carrier(const ClosedTimeSet& s);

// Last visit / next entrance bookkeeping around a time point.
// D is the infimum of visits strictly after t. When t lies in the interior
// of a component that infimum is t itself and `immediate` is set; callers
// treating D as a genuine future entrance must consult the flag.
struct SojournTimes {
  std::optional<double> last_visit;   // G_t = sup{s <= t, s in set}
  std::optional<double> last_strict;  // g_t = sup{s <  t, s in set}
  double next_entrance;               // D_t = inf{s >  t, s in set}, inf = +inf
  double next_or_now;                 // d_t = inf{s >= t, s in set}
  bool in_set;
  bool immediate;  // some component [a,b] has a <= t < b
};

SojournTimes sojourn_query(const ClosedTimeSet& s, double t);

// Minimal non-decreasing Y >= 0 with X + Y >= 0 and dY supported on
// {X + Y = 0}: Y = max(0, running max of -X).
CadlagPath skorokhod_solve(const CadlagPath& x);

struct SkorokhodReport {
  bool nondecreasing_ok = false;
  bool nonneg_ok = false;       // X + Y >= 0 everywhere
  bool support_ok = false;      // dY carried by {X + Y = 0}
  double worst_violation = 0.0;
  bool ok() const { return nondecreasing_ok && nonneg_ok && support_ok; }
};

SkorokhodReport verify_skorokhod(const CadlagPath& x, const CadlagPath& y,
                                 double tol = 0.0);

// CSV dump: header `t,value,kind`, a t=0 INIT row, then one row per event.
void write_csv(std::ostream& os, const CadlagPath& p);
CadlagPath read_csv(std::istream& is, double horizon, TailMode tail);

}  // namespace maxrep
