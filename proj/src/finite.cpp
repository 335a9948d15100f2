#include "maxrep/finite.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "maxrep/rng.hpp"

namespace maxrep {

namespace {
using json = nlohmann::json;

long long to_ll(const boost::multiprecision::cpp_int& v) {
  return v.convert_to<long long>();
}
}  // namespace

int FiniteProbModel::n_cells(int n) const {
  int m = -1;
  for (int c : cell_of[static_cast<std::size_t>(n)]) m = std::max(m, c);
  return m + 1;
}

std::vector<std::vector<int>> FiniteProbModel::cells(int n) const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n_cells(n)));
  for (int w = 0; w < n_outcomes(); ++w)
    out[static_cast<std::size_t>(cell_of[static_cast<std::size_t>(n)]
                                        [static_cast<std::size_t>(w)])]
        .push_back(w);
  return out;
}

void FiniteProbModel::validate() const {
  if (prob.empty() || cell_of.empty())
    throw std::invalid_argument("FiniteProbModel: empty model");
  Rat total = 0;
  for (const Rat& p : prob) {
    if (p <= 0) throw std::invalid_argument("FiniteProbModel: prob <= 0");
    total += p;
  }
  if (total != 1)
    throw std::invalid_argument("FiniteProbModel: probabilities must sum to 1");
  for (const auto& level : cell_of)
    if (level.size() != prob.size())
      throw std::invalid_argument("FiniteProbModel: ragged partition");
  for (std::size_t n = 1; n < cell_of.size(); ++n)
    for (std::size_t w1 = 0; w1 < prob.size(); ++w1)
      for (std::size_t w2 = w1 + 1; w2 < prob.size(); ++w2)
        if (cell_of[n][w1] == cell_of[n][w2] &&
            cell_of[n - 1][w1] != cell_of[n - 1][w2])
          throw std::invalid_argument("FiniteProbModel: partition not refining");
}

FiniteProbModel FiniteProbModel::tree(int periods, int branching,
                                      const std::vector<Rat>& first_branch_prob) {
  if (periods < 1 || branching < 2)
    throw std::invalid_argument("tree: need periods >= 1, branching >= 2");
  if (static_cast<int>(first_branch_prob.size()) != periods)
    throw std::invalid_argument("tree: one branch probability per level");
  int n_out = 1;
  for (int n = 0; n < periods; ++n) n_out *= branching;

  FiniteProbModel model;
  model.prob.assign(static_cast<std::size_t>(n_out), Rat(1));
  model.cell_of.assign(static_cast<std::size_t>(periods) + 1,
                       std::vector<int>(static_cast<std::size_t>(n_out), 0));
  for (int w = 0; w < n_out; ++w) {
    int digits = w;
    // most significant digit = level-1 branch
    std::vector<int> branch(static_cast<std::size_t>(periods));
    for (int lev = periods - 1; lev >= 0; --lev) {
      branch[static_cast<std::size_t>(lev)] = digits % branching;
      digits /= branching;
    }
    int cell = 0;
    for (int n = 1; n <= periods; ++n) {
      int d = branch[static_cast<std::size_t>(n - 1)];
      cell = cell * branching + d;
      model.cell_of[static_cast<std::size_t>(n)][static_cast<std::size_t>(w)] =
          cell;
      const Rat& p0 = first_branch_prob[static_cast<std::size_t>(n - 1)];
      Rat pd = d == 0 ? p0 : (Rat(1) - p0) / (branching - 1);
      model.prob[static_cast<std::size_t>(w)] *= pd;
    }
  }
  model.validate();
  return model;
}

std::vector<Rat> cond_expect(const FiniteProbModel& model,
                             const std::vector<Rat>& x, int n) {
  std::vector<Rat> out(static_cast<std::size_t>(model.n_outcomes()));
  for (const auto& cell : model.cells(n)) {
    Rat mass = 0, acc = 0;
    for (int w : cell) {
      mass += model.prob[static_cast<std::size_t>(w)];
      acc += model.prob[static_cast<std::size_t>(w)] *
             x[static_cast<std::size_t>(w)];
    }
    Rat v = acc / mass;
    for (int w : cell) out[static_cast<std::size_t>(w)] = v;
  }
  return out;
}

bool is_adapted(const FiniteProbModel& model, const AdaptedProcess& x) {
  for (std::size_t n = 0; n < x.values.size(); ++n)
    for (const auto& cell : model.cells(static_cast<int>(n)))
      for (std::size_t i = 1; i < cell.size(); ++i)
        if (x.values[n][static_cast<std::size_t>(cell[i])] !=
            x.values[n][static_cast<std::size_t>(cell[0])])
          return false;
  return true;
}

bool is_stopping_time(const FiniteProbModel& model,
                      const FiniteRandomTime& s) {
  for (int n = 0; n <= model.periods(); ++n)
    for (const auto& cell : model.cells(n))
      for (std::size_t i = 1; i < cell.size(); ++i) {
        bool a = s.value[static_cast<std::size_t>(cell[i])] == n;
        bool b = s.value[static_cast<std::size_t>(cell[0])] == n;
        if (a != b) return false;
      }
  return true;
}

AzemaAnalysis azema_analysis(const FiniteProbModel& model,
                             const FiniteRandomTime& rho) {
  const int N = model.periods();
  const std::size_t W = static_cast<std::size_t>(model.n_outcomes());
  AzemaAnalysis an;
  auto blank = [&] {
    AdaptedProcess p;
    p.values.assign(static_cast<std::size_t>(N) + 1, std::vector<Rat>(W, Rat(0)));
    return p;
  };
  an.Z = blank();
  an.Zt = blank();
  an.A = blank();
  an.a = blank();
  an.C.assign(static_cast<std::size_t>(N) + 1, std::vector<bool>(W, false));

  std::vector<Rat> atom(W);
  for (int n = 0; n <= N; ++n) {
    std::vector<Rat> after(W), from(W), at(W);
    for (std::size_t w = 0; w < W; ++w) {
      after[w] = rho.value[w] > n ? 1 : 0;
      from[w] = rho.value[w] >= n ? 1 : 0;
      at[w] = rho.value[w] == n ? 1 : 0;
    }
    an.Z.values[static_cast<std::size_t>(n)] = cond_expect(model, after, n);
    an.Zt.values[static_cast<std::size_t>(n)] = cond_expect(model, from, n);
    std::vector<Rat> dA = cond_expect(model, at, n);
    std::vector<Rat> da = cond_expect(model, at, std::max(n - 1, 0));
    for (std::size_t w = 0; w < W; ++w) {
      Rat prevA = n == 0 ? Rat(0) : an.A.values[static_cast<std::size_t>(n - 1)][w];
      Rat preva = n == 0 ? Rat(0) : an.a.values[static_cast<std::size_t>(n - 1)][w];
      an.A.values[static_cast<std::size_t>(n)][w] = prevA + dA[w];
      an.a.values[static_cast<std::size_t>(n)][w] = preva + da[w];
      an.C[static_cast<std::size_t>(n)][w] =
          an.Zt.values[static_cast<std::size_t>(n)][w] == 1;
    }
  }
  an.M = an.Z;
  an.m = an.Z;
  for (int n = 0; n <= N; ++n)
    for (std::size_t w = 0; w < W; ++w) {
      an.M.values[static_cast<std::size_t>(n)][w] +=
          an.A.values[static_cast<std::size_t>(n)][w];
      an.m.values[static_cast<std::size_t>(n)][w] +=
          an.a.values[static_cast<std::size_t>(n)][w];
    }
  return an;
}

bool is_honest(const FiniteProbModel& model, const FiniteRandomTime& rho,
               const AzemaAnalysis& an) {
  for (int w = 0; w < model.n_outcomes(); ++w) {
    int n = rho.value[static_cast<std::size_t>(w)];
    if (n > model.periods()) return false;
    if (an.Zt.values[static_cast<std::size_t>(n)][static_cast<std::size_t>(w)] != 1)
      return false;
  }
  return true;
}

bool is_honest_blind(const FiniteProbModel& model,
                     const FiniteRandomTime& rho) {
  // one bit per (level, cell); a mask is an adapted set O, and rho is
  // honest iff some O has sup{n : (n, omega) in O} = rho(omega) pathwise
  std::vector<std::pair<int, int>> slots;
  for (int n = 0; n <= model.periods(); ++n)
    for (int c = 0; c < model.n_cells(n); ++c) slots.emplace_back(n, c);
  if (slots.size() > 22)
    throw std::invalid_argument("is_honest_blind: model too large");
  // per outcome, the slots it passes through, highest level first
  std::vector<std::vector<std::pair<int, std::size_t>>> visits(
      static_cast<std::size_t>(model.n_outcomes()));
  for (int w = 0; w < model.n_outcomes(); ++w) {
    for (std::size_t s = 0; s < slots.size(); ++s) {
      auto [n, c] = slots[s];
      if (model.cell_of[static_cast<std::size_t>(n)]
                       [static_cast<std::size_t>(w)] == c)
        visits[static_cast<std::size_t>(w)].emplace_back(n, s);
    }
    std::sort(visits[static_cast<std::size_t>(w)].begin(),
              visits[static_cast<std::size_t>(w)].end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
  }
  const std::size_t n_masks = std::size_t{1} << slots.size();
  for (std::size_t mask = 0; mask < n_masks; ++mask) {
    bool match = true;
    for (int w = 0; w < model.n_outcomes() && match; ++w) {
      int sup = -1;
      for (const auto& [n, s] : visits[static_cast<std::size_t>(w)])
        if (mask & (std::size_t{1} << s)) {
          sup = n;
          break;
        }
      match = sup == rho.value[static_cast<std::size_t>(w)];
    }
    if (match) return true;
  }
  return false;
}

MmrSearchResult mmr_search(const FiniteProbModel& model,
                           const AdaptedProcess& Z, const AdaptedProcess& A) {
  const int N = model.periods();
  const std::size_t W = static_cast<std::size_t>(model.n_outcomes());
  for (std::size_t w = 0; w < W; ++w) {
    if (Z.values[0][w] != 1)
      throw std::invalid_argument("mmr_search: Z_0 must be 1");
    if (Z.values[static_cast<std::size_t>(N)][w] != 0)
      throw std::invalid_argument("mmr_search: Z_N must be 0");
  }
  MmrSearchResult res;
  res.gamma.values.assign(static_cast<std::size_t>(N) + 1,
                          std::vector<Rat>(W, Rat(0)));
  for (int n = 1; n <= N; ++n) {
    auto parents = model.cells(n - 1);
    for (std::size_t pc = 0; pc < parents.size(); ++pc) {
      Rat rhs = 0;
      for (int w : parents[pc])
        rhs += model.prob[static_cast<std::size_t>(w)] *
               (A.values[static_cast<std::size_t>(n)][static_cast<std::size_t>(w)] -
                A.values[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(w)]);
      if (rhs == 0) continue;
      // find a child cell where Z_n = 1; gamma mass is admissible only there
      std::map<int, Rat> child_mass;
      std::map<int, bool> child_admissible;
      for (int w : parents[pc]) {
        int c = model.cell_of[static_cast<std::size_t>(n)][static_cast<std::size_t>(w)];
        child_mass[c] += model.prob[static_cast<std::size_t>(w)];
        child_admissible[c] =
            Z.values[static_cast<std::size_t>(n)][static_cast<std::size_t>(w)] == 1;
      }
      int chosen = -1;
      for (const auto& [c, adm] : child_admissible)
        if (adm) {
          chosen = c;
          break;
        }
      if (chosen < 0) {
        res.feasible = false;
        res.certificate = {n, static_cast<int>(pc), rhs};
        return res;
      }
      Rat dgamma = rhs / child_mass[chosen];
      for (std::size_t w = 0; w < W; ++w)
        if (model.cell_of[static_cast<std::size_t>(n)][w] == chosen)
          res.gamma.values[static_cast<std::size_t>(n)][w] = dgamma;
    }
  }
  // cumulate
  for (int n = 1; n <= N; ++n)
    for (std::size_t w = 0; w < W; ++w)
      res.gamma.values[static_cast<std::size_t>(n)][w] +=
          res.gamma.values[static_cast<std::size_t>(n - 1)][w];
  res.feasible = true;
  return res;
}

MmrConstruction mmr_construct(const FiniteProbModel& model,
                              const AdaptedProcess& Z,
                              const AdaptedProcess& gamma) {
  const int N = model.periods();
  const std::size_t W = static_cast<std::size_t>(model.n_outcomes());
  MmrConstruction out;
  out.U.values.assign(static_cast<std::size_t>(N) + 1,
                      std::vector<Rat>(W, Rat(1)));
  out.Ustar = out.U;
  for (int n = 1; n <= N; ++n)
    for (std::size_t w = 0; w < W; ++w) {
      Rat dz = Z.values[static_cast<std::size_t>(n)][w] -
               Z.values[static_cast<std::size_t>(n - 1)][w];
      Rat dg = gamma.values[static_cast<std::size_t>(n)][w] -
               gamma.values[static_cast<std::size_t>(n - 1)][w];
      Rat u = out.U.values[static_cast<std::size_t>(n - 1)][w] +
              out.Ustar.values[static_cast<std::size_t>(n - 1)][w] * (dz + dg);
      if (u < 0) out.nonneg = false;
      out.U.values[static_cast<std::size_t>(n)][w] = u;
      out.Ustar.values[static_cast<std::size_t>(n)][w] =
          std::max(out.Ustar.values[static_cast<std::size_t>(n - 1)][w], u);
    }
  for (int n = 0; n <= N && out.ratio_matches_Z; ++n)
    for (std::size_t w = 0; w < W; ++w)
      if (Z.values[static_cast<std::size_t>(n)][w] *
              out.Ustar.values[static_cast<std::size_t>(n)][w] !=
          out.U.values[static_cast<std::size_t>(n)][w]) {
        out.ratio_matches_Z = false;
        break;
      }
  return out;
}

std::vector<bool> martingale_steps(const FiniteProbModel& model,
                                   const AdaptedProcess& x) {
  const int N = static_cast<int>(x.values.size()) - 1;
  std::vector<bool> ok(static_cast<std::size_t>(N), true);
  for (int n = 1; n <= N; ++n)
    for (const auto& cell : model.cells(n - 1)) {
      Rat acc = 0;
      for (int w : cell)
        acc += model.prob[static_cast<std::size_t>(w)] *
               (x.values[static_cast<std::size_t>(n)][static_cast<std::size_t>(w)] -
                x.values[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(w)]);
      if (acc != 0) ok[static_cast<std::size_t>(n - 1)] = false;
    }
  return ok;
}

namespace {
int last_shadow_visit(const AzemaAnalysis& an, int upto, std::size_t w) {
  for (int n = upto; n >= 0; --n)
    if (an.C[static_cast<std::size_t>(n)][w]) return n;
  return -1;  // unreachable: Zt_0 = 1 always
}
}  // namespace

bool relative_martingale_check(const FiniteProbModel& model,
                               const AzemaAnalysis& an,
                               const FiniteRandomTime& S,
                               const FiniteRandomTime& T) {
  const std::size_t W = static_cast<std::size_t>(model.n_outcomes());
  for (std::size_t w = 0; w < W; ++w)
    if (S.value[w] > T.value[w])
      throw std::invalid_argument("relative_martingale_check: need S <= T");

  // atoms of the stopped observer F_S: (S value, P_S cell)
  std::map<std::pair<int, int>, std::vector<int>> atoms;
  for (std::size_t w = 0; w < W; ++w) {
    int n = S.value[w];
    atoms[{n, model.cell_of[static_cast<std::size_t>(n)][w]}].push_back(
        static_cast<int>(w));
  }
  for (const auto& [key, atom] : atoms) {
    int n = key.first;
    Rat mass = 0, rhs1 = 0, rhs2 = 0;
    for (int w : atom) {
      std::size_t sw = static_cast<std::size_t>(w);
      int t = T.value[sw];
      int g = last_shadow_visit(an, t, sw);
      const Rat& zT = an.Z.values[static_cast<std::size_t>(t)][sw];
      const Rat& ztT = an.Zt.values[static_cast<std::size_t>(t)][sw];
      mass += model.prob[sw];
      if (g <= n) rhs1 += model.prob[sw] * (Rat(1) - zT);
      if (g < n) rhs2 += model.prob[sw] * (Rat(1) - ztT);
    }
    std::size_t w0 = static_cast<std::size_t>(atom[0]);
    Rat lhs1 = Rat(1) - an.Z.values[static_cast<std::size_t>(n)][w0];
    Rat lhs2 = Rat(1) - an.Zt.values[static_cast<std::size_t>(n)][w0];
    if (lhs1 * mass != rhs1 || lhs2 * mass != rhs2) return false;
  }
  return true;
}

HonestSupportReport honest_support_checks(const FiniteProbModel& model,
                                          const FiniteRandomTime& rho,
                                          const AzemaAnalysis& an) {
  const int N = model.periods();
  const std::size_t W = static_cast<std::size_t>(model.n_outcomes());
  HonestSupportReport rep;
  (void)rho;
  for (int n = 0; n <= N; ++n)
    for (std::size_t w = 0; w < W; ++w) {
      std::size_t sn = static_cast<std::size_t>(n);
      Rat dA = an.A.values[sn][w] -
               (n == 0 ? Rat(0) : an.A.values[sn - 1][w]);
      if (dA > 0 && !an.C[sn][w]) rep.dA_on_shadow = false;
      if (n >= 1) {
        bool jump = dA > 0;
        bool gap = an.Zt.values[sn][w] > an.Z.values[sn][w];
        if (jump != gap) rep.jump_set_matches = false;
        if (an.Z.values[sn - 1][w] == 1 && !an.C[sn][w])
          rep.zminus_in_shadow = false;
      }
      if (!an.C[sn][w] && an.Zt.values[sn][w] != an.Z.values[sn][w])
        rep.zt_eq_z_off_shadow = false;
    }
  for (std::size_t w = 0; w < W; ++w) {
    int R = N + 1;
    for (int n = 0; n <= N; ++n)
      if (an.Z.values[static_cast<std::size_t>(n)][w] == 0) {
        R = n;
        break;
      }
    for (int s = R; s <= N; ++s)
      if (an.Z.values[static_cast<std::size_t>(s)][w] != 0)
        rep.zero_after_R = false;
  }
  return rep;
}

ModifReport modif_predictable(const FiniteProbModel& model,
                              const AdaptedProcess& Z,
                              const AdaptedProcess& A,
                              const AdaptedProcess& gamma, int T,
                              const std::vector<Rat>& xi) {
  const int N = model.periods();
  const std::size_t W = static_cast<std::size_t>(model.n_outcomes());
  if (T < 1 || T > N)
    throw std::invalid_argument("modif_predictable: T out of range");
  for (const Rat& x : xi)
    if (x < 0) throw std::invalid_argument("modif_predictable: xi < 0");
  for (const auto& cell : model.cells(T))
    for (std::size_t i = 1; i < cell.size(); ++i)
      if (xi[static_cast<std::size_t>(cell[i])] !=
          xi[static_cast<std::size_t>(cell[0])])
        throw std::invalid_argument("modif_predictable: xi not P_T-measurable");

  ModifReport rep;
  std::size_t sT = static_cast<std::size_t>(T);
  auto dgamma_T = [&](std::size_t w) {
    return gamma.values[sT][w] - gamma.values[sT - 1][w];
  };

  rep.pre_ok = true;
  rep.pre_residual = 0;
  for (const auto& cell : model.cells(T - 1)) {
    Rat acc = 0;
    for (int w : cell) {
      std::size_t sw = static_cast<std::size_t>(w);
      Rat dA = A.values[sT][sw] - A.values[sT - 1][sw];
      Rat x = dgamma_T(sw) > 0 ? xi[sw] : Rat(0);
      acc += model.prob[sw] * (-dA + x);
    }
    if (acc != 0) {
      rep.pre_ok = false;
      if (abs(acc) > abs(rep.pre_residual)) rep.pre_residual = acc;
    }
  }

  rep.gamma_hat = gamma;
  for (int n = T; n <= N; ++n)
    for (std::size_t w = 0; w < W; ++w) {
      Rat shift = -dgamma_T(w) + (dgamma_T(w) > 0 ? xi[w] : Rat(0));
      rep.gamma_hat.values[static_cast<std::size_t>(n)][w] += shift;
    }

  for (int n = 1; n <= N; ++n)
    for (std::size_t w = 0; w < W; ++w) {
      Rat d = rep.gamma_hat.values[static_cast<std::size_t>(n)][w] -
              rep.gamma_hat.values[static_cast<std::size_t>(n - 1)][w];
      if (d < 0) rep.monotone = false;
      if (d > 0 && Z.values[static_cast<std::size_t>(n)][w] != 1)
        rep.support_ok = false;
    }

  AdaptedProcess test;
  test.values.assign(static_cast<std::size_t>(N) + 1, std::vector<Rat>(W));
  for (int n = 0; n <= N; ++n)
    for (std::size_t w = 0; w < W; ++w)
      test.values[static_cast<std::size_t>(n)][w] =
          rep.gamma_hat.values[static_cast<std::size_t>(n)][w] -
          A.values[static_cast<std::size_t>(n)][w];
  rep.martingale_step_ok = martingale_steps(model, test);
  return rep;
}

namespace {
void stopping_times_rec(const FiniteProbModel& model, int n,
                        const std::vector<int>& members,
                        std::vector<std::vector<std::pair<int, int>>>& out) {
  // returns assignments (omega, value) covering `members`
  std::vector<std::vector<std::pair<int, int>>> stop_here(1);
  for (int w : members) stop_here[0].emplace_back(w, n);
  if (n == model.periods()) {
    out = std::move(stop_here);
    return;
  }
  // continue: split into P_{n+1} children, cartesian product
  std::map<int, std::vector<int>> children;
  for (int w : members)
    children[model.cell_of[static_cast<std::size_t>(n + 1)]
                          [static_cast<std::size_t>(w)]]
        .push_back(w);
  std::vector<std::vector<std::vector<std::pair<int, int>>>> child_opts;
  for (const auto& [c, mem] : children) {
    std::vector<std::vector<std::pair<int, int>>> opts;
    stopping_times_rec(model, n + 1, mem, opts);
    child_opts.push_back(std::move(opts));
  }
  std::vector<std::vector<std::pair<int, int>>> combos(1);
  for (const auto& opts : child_opts) {
    std::vector<std::vector<std::pair<int, int>>> next;
    for (const auto& base : combos)
      for (const auto& opt : opts) {
        auto merged = base;
        merged.insert(merged.end(), opt.begin(), opt.end());
        next.push_back(std::move(merged));
      }
    combos = std::move(next);
  }
  out = std::move(stop_here);
  for (auto& c : combos) out.push_back(std::move(c));
}
}  // namespace

std::vector<FiniteRandomTime> enumerate_stopping_times(
    const FiniteProbModel& model) {
  std::vector<int> all(static_cast<std::size_t>(model.n_outcomes()));
  for (int w = 0; w < model.n_outcomes(); ++w)
    all[static_cast<std::size_t>(w)] = w;
  // P_0 may have several cells; treat each as an independent root
  std::map<int, std::vector<int>> roots;
  for (int w : all)
    roots[model.cell_of[0][static_cast<std::size_t>(w)]].push_back(w);
  std::vector<std::vector<std::vector<std::pair<int, int>>>> root_opts;
  for (const auto& [c, mem] : roots) {
    std::vector<std::vector<std::pair<int, int>>> opts;
    stopping_times_rec(model, 0, mem, opts);
    root_opts.push_back(std::move(opts));
  }
  std::vector<std::vector<std::pair<int, int>>> combos(1);
  for (const auto& opts : root_opts) {
    std::vector<std::vector<std::pair<int, int>>> next;
    for (const auto& base : combos)
      for (const auto& opt : opts) {
        auto merged = base;
        merged.insert(merged.end(), opt.begin(), opt.end());
        next.push_back(std::move(merged));
      }
    combos = std::move(next);
  }
  std::vector<FiniteRandomTime> out;
  out.reserve(combos.size());
  for (const auto& c : combos) {
    FiniteRandomTime t;
    t.value.assign(static_cast<std::size_t>(model.n_outcomes()), 0);
    for (auto [w, v] : c) t.value[static_cast<std::size_t>(w)] = v;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<FiniteRandomTime> enumerate_random_times(
    const FiniteProbModel& model, int lo, int hi) {
  const int W = model.n_outcomes();
  const int base = hi - lo + 1;
  double count = 1;
  for (int w = 0; w < W; ++w) count *= base;
  if (count > 2e5)
    throw std::invalid_argument("enumerate_random_times: too many");
  std::vector<FiniteRandomTime> out;
  FiniteRandomTime cur;
  cur.value.assign(static_cast<std::size_t>(W), lo);
  while (true) {
    out.push_back(cur);
    int i = 0;
    while (i < W) {
      if (cur.value[static_cast<std::size_t>(i)] < hi) {
        ++cur.value[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) cur.value[static_cast<std::size_t>(j)] = lo;
        break;
      }
      ++i;
    }
    if (i == W) break;
  }
  return out;
}

std::string model_to_json(
    const FiniteProbModel& model,
    const std::map<std::string, AdaptedProcess>& processes) {
  json j;
  j["outcomes"] = json::array();
  for (const Rat& p : model.prob)
    j["outcomes"].push_back({{"prob_num", to_ll(numerator(p))},
                             {"prob_den", to_ll(denominator(p))}});
  j["partitions"] = model.cell_of;
  j["processes"] = json::object();
  for (const auto& [name, proc] : processes) {
    json rows = json::array();
    for (const auto& row : proc.values) {
      json vals = json::array();
      for (const Rat& v : row)
        vals.push_back({{"num", to_ll(numerator(v))},
                        {"den", to_ll(denominator(v))}});
      rows.push_back(vals);
    }
    j["processes"][name] = rows;
  }
  return j.dump(2);
}

}  // namespace maxrep
