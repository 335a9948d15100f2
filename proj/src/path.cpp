#include "maxrep/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace maxrep {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_close(double a, double b, double rel_tol) {
  if (rel_tol == 0.0) return a == b;
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= rel_tol * scale;
}
}  // namespace

CadlagPath::CadlagPath(double initial, double horizon, TailMode tail,
                       std::vector<PathEvent> events)
    : initial_(initial), horizon_(horizon), tail_(tail),
      events_(std::move(events)) {
  if (!(horizon_ > 0.0) && !events_.empty())
    throw std::invalid_argument("CadlagPath: nonpositive horizon");
  double prev = -kInf;
  for (const auto& e : events_) {
    if (!(e.time > prev))
      throw std::invalid_argument("CadlagPath: event times must increase");
    if (e.time < 0.0 || e.time > horizon_)
      throw std::invalid_argument("CadlagPath: event time outside [0, horizon]");
    prev = e.time;
  }
}

std::size_t CadlagPath::upper_index(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(events_.begin(), events_.end(), t,
                       [](double v, const PathEvent& e) { return v < e.time; }) -
      events_.begin());
}

double CadlagPath::value_at(double t) const {
  std::size_t i = upper_index(t);
  return i == 0 ? initial_ : events_[i - 1].value;
}

double CadlagPath::left_limit_at(double t) const {
  std::size_t i = upper_index(t);
  if (i > 0 && events_[i - 1].time == t) --i;
  return i == 0 ? initial_ : events_[i - 1].value;
}

double CadlagPath::jump_at(double t) const {
  const PathEvent* e = event_at(t);
  if (e == nullptr || e->kind != EventKind::Jump) return 0.0;
  return e->value - left_limit_at(t);
}

double CadlagPath::interp_value_at(double t) const {
  std::size_t i = upper_index(t);
  if (i == events_.size()) return i == 0 ? initial_ : events_.back().value;
  const PathEvent& next = events_[i];
  double prev_t = i == 0 ? 0.0 : events_[i - 1].time;
  double prev_v = i == 0 ? initial_ : events_[i - 1].value;
  if (next.kind == EventKind::Jump || next.time <= prev_t) return prev_v;
  if (t <= prev_t) return prev_v;
  double frac = (t - prev_t) / (next.time - prev_t);
  return prev_v + frac * (next.value - prev_v);
}

double CadlagPath::final_value() const {
  return events_.empty() ? initial_ : events_.back().value;
}

double CadlagPath::max_value() const {
  double m = initial_;
  for (const auto& e : events_) m = std::max(m, e.value);
  return m;
}

const PathEvent* CadlagPath::event_at(double t) const {
  std::size_t i = upper_index(t);
  if (i > 0 && events_[i - 1].time == t) return &events_[i - 1];
  return nullptr;
}

bool CadlagPath::same_events(const CadlagPath& other) const {
  if (initial_ != other.initial_ || events_.size() != other.events_.size())
    return false;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto& a = events_[i];
    const auto& b = other.events_[i];
    if (a.time != b.time || a.value != b.value || a.kind != b.kind)
      return false;
  }
  return true;
}

PathBuilder::PathBuilder(double initial, double horizon, TailMode tail)
    : initial_(initial), horizon_(horizon), tail_(tail) {
  if (!(horizon >= 0.0))
    throw std::invalid_argument("PathBuilder: horizon must be nonnegative");
}

PathBuilder& PathBuilder::append(double t, double value, EventKind kind) {
  if (!std::isfinite(t) || t < 0.0)
    throw std::invalid_argument("PathBuilder: bad event time");
  if (!events_.empty() && t <= events_.back().time)
    t = std::nextafter(events_.back().time, kInf);
  if (t > horizon_)
    throw std::invalid_argument("PathBuilder: event beyond horizon");
  events_.push_back({t, value, kind});
  return *this;
}

PathBuilder& PathBuilder::append_if_changed(double t, double value,
                                            EventKind kind) {
  if (value == last_value()) return *this;
  return append(t, value, kind);
}

double PathBuilder::last_time() const {
  return events_.empty() ? 0.0 : events_.back().time;
}

double PathBuilder::last_value() const {
  return events_.empty() ? initial_ : events_.back().value;
}

CadlagPath PathBuilder::build() && {
  return CadlagPath(initial_, horizon_, tail_, std::move(events_));
}

std::vector<Increment> increments(const CadlagPath& x) {
  std::vector<Increment> out;
  out.reserve(x.size());
  double prev = x.initial_value();
  for (const auto& e : x.events()) {
    out.push_back({e.time, e.value - prev, e.kind});
    prev = e.value;
  }
  return out;
}

CadlagPath running_max(const CadlagPath& x) {
  std::vector<PathEvent> evs;
  double m = x.initial_value();
  for (const auto& e : x.events()) {
    if (e.value > m) {
      m = e.value;
      evs.push_back({e.time, m, e.kind});
    }
  }
  return CadlagPath(x.initial_value(), x.horizon(), x.tail(), std::move(evs));
}

TimePredicate equals_carrier(const CadlagPath& a, const CadlagPath& b,
                             double rel_tol) {
  return TimePredicate{
      [&a, &b, rel_tol](double t) {
        return rel_close(a.value_at(t), b.value_at(t), rel_tol);
      },
      [&a, &b, rel_tol](double t) {
        return rel_close(a.left_limit_at(t), b.left_limit_at(t), rel_tol);
      }};
}

TimePredicate level_carrier(const CadlagPath& a, double level,
                            double rel_tol) {
  return TimePredicate{
      [&a, level, rel_tol](double t) {
        return rel_close(a.value_at(t), level, rel_tol);
      },
      [&a, level, rel_tol](double t) {
        return rel_close(a.left_limit_at(t), level, rel_tol);
      }};
}

SupportReport support_check(const CadlagPath& increasing,
                            const TimePredicate& carrier) {
  SupportReport rep;
  for (const auto& inc : increments(increasing)) {
    if (inc.delta < 0.0)
      throw std::invalid_argument("support_check: path not non-decreasing");
    if (inc.delta == 0.0) continue;
    rep.total_mass += inc.delta;
    bool carried = inc.kind == EventKind::Jump
                       ? carrier.at(inc.time)
                       : (carrier.before(inc.time) || carrier.at(inc.time));
    if (!carried) {
      rep.escaped_mass += inc.delta;
      if (!rep.first_escape) rep.first_escape = inc.time;
    }
  }
  return rep;
}

ClosedTimeSet ClosedTimeSet::from_intervals(
    std::vector<std::pair<double, double>> raw, double horizon) {
  for (const auto& [a, b] : raw)
    if (!(a <= b))
      throw std::invalid_argument("ClosedTimeSet: interval with a > b");
  std::sort(raw.begin(), raw.end());
  ClosedTimeSet out;
  out.horizon_ = horizon;
  for (const auto& iv : raw) {
    if (!out.comps_.empty() && iv.first <= out.comps_.back().second)
      out.comps_.back().second = std::max(out.comps_.back().second, iv.second);
    else
      out.comps_.push_back(iv);
  }
  return out;
}

bool ClosedTimeSet::contains(double t) const {
  auto it = std::upper_bound(
      comps_.begin(), comps_.end(), t,
      [](double v, const std::pair<double, double>& c) { return v < c.first; });
  if (it == comps_.begin()) return false;
  --it;
  return t <= it->second;
}

TimePredicate set_carrier(const ClosedTimeSet& s) {
  return TimePredicate{[&s](double t) { return s.contains(t); },
                       [&s](double t) { return s.contains(t); }};
}

SojournTimes sojourn_query(const ClosedTimeSet& s, double t) {
  SojournTimes out;
  out.next_entrance = kInf;
  out.next_or_now = kInf;
  out.in_set = s.contains(t);
  out.immediate = false;
  const auto& comps = s.components();
  auto it = std::upper_bound(
      comps.begin(), comps.end(), t,
      [](double v, const std::pair<double, double>& c) { return v < c.first; });
  if (it != comps.end()) {
    out.next_entrance = it->first;
    out.next_or_now = it->first;
  }
  if (it != comps.begin()) {
    const auto& c = *std::prev(it);  // latest component starting at or before t
    out.last_visit = std::min(c.second, t);
    if (c.first < t)
      out.last_strict = std::min(c.second, t);  // sup of [a,b] ∩ [0,t)
    else if (std::prev(it) != comps.begin())
      out.last_strict = std::prev(it, 2)->second;
    if (t < c.second) {
      out.next_entrance = t;  // infimum over (t, b]; not attained, flagged
      out.immediate = true;
    }
  }
  if (out.in_set) out.next_or_now = t;
  return out;
}

CadlagPath skorokhod_solve(const CadlagPath& x) {
  double m = std::max(0.0, -x.initial_value());
  std::vector<PathEvent> evs;
  for (const auto& e : x.events()) {
    double cand = -e.value;
    if (cand > m) {
      m = cand;
      evs.push_back({e.time, m, e.kind});
    }
  }
  return CadlagPath(std::max(0.0, -x.initial_value()), x.horizon(), x.tail(),
                    std::move(evs));
}

SkorokhodReport verify_skorokhod(const CadlagPath& x, const CadlagPath& y,
                                 double tol) {
  SkorokhodReport rep;
  rep.nondecreasing_ok = y.initial_value() >= 0.0;
  double prev = y.initial_value();
  for (const auto& e : y.events()) {
    if (e.value < prev) rep.nondecreasing_ok = false;
    prev = e.value;
  }

  // X + Y over the union of event times
  rep.nonneg_ok = true;
  double worst = 0.0;
  auto probe = [&](double t) {
    double s = x.value_at(t) + y.value_at(t);
    if (s < -tol) {
      rep.nonneg_ok = false;
      worst = std::min(worst, s);
    }
  };
  probe(0.0);
  for (const auto& e : x.events()) probe(e.time);
  for (const auto& e : y.events()) probe(e.time);
  rep.worst_violation = -worst;

  TimePredicate zero{
      [&](double t) {
        return std::fabs(x.value_at(t) + y.value_at(t)) <= tol;
      },
      [&](double t) {
        return std::fabs(x.left_limit_at(t) + y.left_limit_at(t)) <= tol;
      }};
  SupportReport sup = support_check(y, zero);
  rep.support_ok = sup.ok(tol);
  return rep;
}

void write_csv(std::ostream& os, const CadlagPath& p) {
  char buf[64];
  os << "t,value,kind\n";
  std::snprintf(buf, sizeof buf, "0,%.17g,INIT\n", p.initial_value());
  os << buf;
  for (const auto& e : p.events()) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s\n", e.time, e.value,
                  e.kind == EventKind::Jump ? "JUMP" : "GRID");
    os << buf;
  }
}

CadlagPath read_csv(std::istream& is, double horizon, TailMode tail) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,value,kind", 0) != 0)
    throw std::invalid_argument("read_csv: missing header");
  double initial = 0.0;
  bool have_init = false;
  std::vector<PathEvent> evs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tt, vv, kk;
    if (!std::getline(ls, tt, ',') || !std::getline(ls, vv, ',') ||
        !std::getline(ls, kk))
      throw std::invalid_argument("read_csv: malformed row");
    double t = std::stod(tt);
    double v = std::stod(vv);
    if (kk == "INIT") {
      initial = v;
      have_init = true;
    } else {
      evs.push_back({t, v, kk == "JUMP" ? EventKind::Jump : EventKind::Grid});
    }
  }
  if (!have_init) throw std::invalid_argument("read_csv: missing INIT row");
  return CadlagPath(initial, horizon, tail, std::move(evs));
}

}  // namespace maxrep
