#include "maxrep/represent.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "maxrep/calculus.hpp"

namespace maxrep {

namespace {

struct DriverSlot {
  double grid = 0.0;
  double jump = 0.0;
};

void accumulate_driver(const CadlagPath& x, std::map<double, DriverSlot>& out) {
  double prev = x.initial_value();
  for (const PathEvent& e : x.events()) {
    double d = e.value - prev;
    if (e.kind == EventKind::Grid)
      out[e.time].grid += d;
    else
      out[e.time].jump += d;
    prev = e.value;
  }
}

[[noreturn]] void negative_u(double t) {
  std::ostringstream os;
  os << "sde_solve_mmr: U went negative at t = " << t
     << " (gamma is not admissible for this Z)";
  throw std::domain_error(os.str());
}

bool is_continuous(const CadlagPath& p) {
  for (const PathEvent& e : p.events())
    if (e.kind == EventKind::Jump) return false;
  return true;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "VALID";
    case Verdict::ValidOnHorizon: return "VALID-ON-HORIZON";
    default: return "REFUTED";
  }
}

MmrSolution sde_solve_mmr(const CadlagPath& z, const CadlagPath& gamma) {
  if (z.horizon() != gamma.horizon())
    throw std::invalid_argument("sde_solve_mmr: mismatched horizons");
  if (z.initial_value() != 1.0)
    throw std::invalid_argument("sde_solve_mmr: Z must start at 1");
  if (gamma.initial_value() != 0.0)
    throw std::invalid_argument("sde_solve_mmr: gamma must start at 0");
  for (const PathEvent& e : z.events())
    if (e.value < 0.0)
      throw std::invalid_argument("sde_solve_mmr: Z must stay nonnegative");
  {
    double prev = 0.0;
    for (const PathEvent& e : gamma.events()) {
      if (e.value < prev) {
        std::ostringstream os;
        os << "sde_solve_mmr: gamma decreases at t = " << e.time;
        throw std::invalid_argument(os.str());
      }
      prev = e.value;
    }
  }

  std::map<double, DriverSlot> driver;
  accumulate_driver(z, driver);
  accumulate_driver(gamma, driver);

  // State: U* = base * exp(acc); U rides the max (at_max) or sits below
  // it at `below`. acc is only nonzero while at the max, so emitted
  // values are one exp() of an exactly accumulated exponent.
  double base = 1.0, acc = 0.0, below = 1.0;
  bool at_max = true;

  PathBuilder bu(1.0, z.horizon(), TailMode::Truncated);
  PathBuilder bstar(1.0, z.horizon(), TailMode::Truncated);
  double star_emitted = 1.0;

  auto collapse = [&]() {
    if (acc != 0.0) {
      base *= std::exp(acc);
      acc = 0.0;
    }
    return base;
  };

  for (const auto& [t, slot] : driver) {
    bool star_jumped = false;

    if (slot.grid != 0.0) {
      if (at_max) {
        if (slot.grid >= 0.0) {
          acc += slot.grid;
        } else {
          double cap = collapse();
          below = cap * (1.0 + slot.grid);
          if (below < 0.0) negative_u(t);
          at_max = below == cap;
        }
      } else {
        double cap = collapse();
        if (slot.grid >= 0.0) {
          double headroom = (cap - below) / cap;  // gamma-units to the max
          if (slot.grid <= headroom) {
            below += cap * slot.grid;
            at_max = below == cap;
          } else {
            acc = slot.grid - headroom;
            at_max = true;
          }
        } else {
          below += cap * slot.grid;
          if (below < 0.0) negative_u(t);
        }
      }
    }

    if (slot.jump != 0.0) {
      double cap = collapse();
      double from = at_max ? cap : below;
      double next = from + cap * slot.jump;
      if (next < 0.0) negative_u(t);
      if (next > cap) {
        base = next;
        at_max = true;
        star_jumped = true;
      } else {
        below = next;
        at_max = next == cap;
      }
    }

    double star_now = acc == 0.0 ? base : base * std::exp(acc);
    double u_now = at_max ? star_now : below;
    bu.append(t, u_now, slot.jump != 0.0 ? EventKind::Jump : EventKind::Grid);
    if (star_now != star_emitted) {
      bstar.append(t, star_now,
                   star_jumped ? EventKind::Jump : EventKind::Grid);
      star_emitted = star_now;
    }
  }

  MmrSolution out;
  bool absorbed =
      z.tail() == TailMode::Absorbed && (at_max ? false : below == 0.0);
  out.u = CadlagPath(1.0, z.horizon(),
                     absorbed ? TailMode::Absorbed : TailMode::Truncated,
                     std::move(bu).build().events());
  out.u_star = std::move(bstar).build();
  return out;
}

CadlagPath extract_gamma(const CadlagPath& u, const CadlagPath& u_star) {
  PathBuilder b(0.0, u.horizon(), TailMode::Truncated);
  double prev = u_star.initial_value();
  double total = 0.0;
  for (const PathEvent& e : u_star.events()) {
    if (e.value > prev) {
      double d = e.kind == EventKind::Grid ? std::log(e.value / prev)
                                           : (e.value - prev) / prev;
      total += d;
      b.append(e.time, total, e.kind);
    }
    prev = e.value;
  }
  return std::move(b).build();
}

CadlagPath extract_gamma(const CadlagPath& u) {
  return extract_gamma(u, running_max(u));
}

MmrCertificate verify_mmr_path(const CadlagPath& z, const CadlagPath& u,
                               const VerifyOptions& opt) {
  MmrCertificate cert;
  CadlagPath fallback_star;
  const CadlagPath* star = opt.u_star;
  if (!star) {
    fallback_star = running_max(u);
    star = &fallback_star;
  }

  auto push = [&cert](const std::string& name, bool pass, double value) {
    cert.checks.push_back({name, pass, value});
    if (!pass && cert.reason.empty()) cert.reason = name;
  };

  // residual of the ratio reconstruction at every event time
  double residual = 0.0;
  {
    auto probe = [&](double t) {
      double uv = u.value_at(t);
      double sv = star->value_at(t);
      double ratio = uv == sv ? 1.0 : uv / sv;
      double r = std::abs(z.value_at(t) - ratio);
      residual = std::max(residual, r);
    };
    probe(0.0);
    for (const PathEvent& e : z.events()) probe(e.time);
    for (const PathEvent& e : u.events()) probe(e.time);
    for (const PathEvent& e : star->events()) probe(e.time);
  }
  cert.max_residual = residual;
  push("ratio_residual", residual <= opt.residual_tol, residual);

  // dU* lives on {Z = 1}
  SupportReport sup = support_check(*star, level_carrier(z, 1.0));
  push("dustar_support", sup.ok(opt.support_tol), sup.escaped_mass);

  // optional bracket checks against the supplied compensator
  if (opt.a) {
    CadlagPath br = jump_covariation(*opt.a, *star);
    double mass = std::abs(br.initial_value());
    for (const PathEvent& e : br.events())
      mass = std::max(mass, std::abs(e.value));
    push("bracket_a_ustar", mass <= opt.bracket_tol, mass);
  }

  // shared jump times of Z and U* may occur only where Z_- < 1 = Z
  {
    bool ok = true;
    double worst = 0.0;
    for (const PathEvent& e : star->events()) {
      if (e.kind != EventKind::Jump) continue;
      const PathEvent* ze = z.event_at(e.time);
      if (!ze || ze->kind != EventKind::Jump) continue;
      double zminus = z.left_limit_at(e.time);
      double znow = z.value_at(e.time);
      if (!(zminus < 1.0) || std::abs(znow - 1.0) > opt.residual_tol) {
        ok = false;
        worst = std::max(worst, std::abs(znow - 1.0));
      }
    }
    push("z_ustar_jump_sites", ok, worst);
  }

  // the max does not move by a jump at the last-max time
  if (!std::isnan(opt.rho)) {
    double j = 0.0;
    if (const PathEvent* e = star->event_at(opt.rho))
      if (e->kind == EventKind::Jump) j = star->jump_at(opt.rho);
    push("ustar_jump_at_rho", std::abs(j) <= opt.bracket_tol, std::abs(j));
  }

  bool all = true;
  for (const CheckOutcome& c : cert.checks) all = all && c.pass;
  bool vanishes = u.tail() == TailMode::Absorbed && u.final_value() == 0.0;
  cert.verdict = !all ? Verdict::Refuted
                      : (vanishes ? Verdict::Valid : Verdict::ValidOnHorizon);
  return cert;
}

CadlagPath remove_ti_jump(const CadlagPath& u, double T, const CadlagPath& v) {
  if (!is_continuous(v))
    throw std::domain_error("remove_ti_jump: v must be continuous");
  bool finite = std::isfinite(T);
  double factor = 1.0;
  if (finite) {
    const PathEvent* e = u.event_at(T);
    if (!e || e->kind != EventKind::Jump || u.jump_at(T) <= 0.0)
      throw std::domain_error(
          "remove_ti_jump: U needs a positive jump at T");
    factor = 1.0 + u.jump_at(T) / u.left_limit_at(T);
  }

  std::map<double, EventKind> times;
  for (const PathEvent& e : v.events()) times.emplace(e.time, EventKind::Grid);
  for (const PathEvent& e : u.events()) {
    auto [it, inserted] = times.emplace(e.time, e.kind);
    if (!inserted && e.kind == EventKind::Jump) it->second = EventKind::Jump;
  }

  PathBuilder b(u.initial_value() * std::exp(v.initial_value()), u.horizon(),
                u.tail());
  for (const auto& [t, kind] : times) {
    double val = u.value_at(t) * std::exp(v.value_at(t));
    if (finite && t >= T) val /= factor;
    EventKind k = finite && t == T ? EventKind::Grid : kind;
    b.append_if_changed(t, val, k);
  }
  return std::move(b).build();
}

CadlagPath compensator_swap_ti(const CadlagPath& gamma, double T, double xi,
                               const CadlagPath& v, const CadlagPath& vprime) {
  if (!is_continuous(v) || !is_continuous(vprime))
    throw std::domain_error(
        "compensator_swap_ti: compensators must be continuous");
  bool finite = std::isfinite(T);
  double big = 0.0;
  if (finite) {
    const PathEvent* e = gamma.event_at(T);
    if (!e || e->kind != EventKind::Jump || gamma.jump_at(T) <= 0.0)
      throw std::domain_error(
          "compensator_swap_ti: gamma needs a positive jump at T");
    big = gamma.jump_at(T);
    if (xi < 0.0 || xi > big)
      throw std::domain_error(
          "compensator_swap_ti: xi must lie in [0, Delta_T gamma]");
  } else {
    xi = 0.0;
  }

  std::map<double, bool> times;  // time -> gamma has a Jump event here
  for (const PathEvent& e : v.events()) times.emplace(e.time, false);
  for (const PathEvent& e : vprime.events()) times.emplace(e.time, false);
  for (const PathEvent& e : gamma.events()) {
    auto [it, inserted] = times.emplace(e.time, e.kind == EventKind::Jump);
    if (!inserted && e.kind == EventKind::Jump) it->second = true;
  }

  PathBuilder b(gamma.initial_value(), gamma.horizon(), gamma.tail());
  double prev = gamma.initial_value();
  for (const auto& [t, gamma_jumps] : times) {
    bool past = finite && t >= T;
    double d1 = (past ? big : 0.0) - v.value_at(t);
    double d2 = (past ? xi : 0.0) - vprime.value_at(t);
    double val = (gamma.value_at(t) - d1) + d2;
    if (val < prev) {
      std::ostringstream os;
      os << "compensator_swap_ti: result decreases at t = " << t;
      throw std::domain_error(os.str());
    }
    double jump_part = (gamma_jumps ? gamma.jump_at(t) : 0.0) -
                       (finite && t == T ? big - xi : 0.0);
    b.append_if_changed(t, val,
                        jump_part != 0.0 ? EventKind::Jump : EventKind::Grid);
    prev = val;
  }
  return std::move(b).build();
}

}  // namespace maxrep
