#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "maxrep/finite.hpp"
#include "maxrep/rng.hpp"

namespace maxrep {

namespace {

// odometer over {lo..hi}^W
bool advance_time(FiniteRandomTime& t, int lo, int hi) {
  for (std::size_t i = 0; i < t.value.size(); ++i) {
    if (t.value[i] < hi) {
      ++t.value[i];
      for (std::size_t j = 0; j < i; ++j) t.value[j] = lo;
      return true;
    }
    t.value[i] = lo;
  }
  return false;
}

struct CaseStats {
  long identity_failures = 0;
  bool honest = false;
  bool feasible = false;
  long variant2 = 0;
  std::vector<std::string> notes;
};

void note(CaseStats& st, const std::string& label, const std::string& what) {
  if (st.notes.size() < 4) st.notes.push_back(label + ": " + what);
  ++st.identity_failures;
}

CaseStats run_case(const FiniteProbModel& model, const FiniteRandomTime& rho,
                   const AzemaAnalysis& an, const std::string& label) {
  const int N = model.periods();
  const std::size_t W = static_cast<std::size_t>(model.n_outcomes());
  CaseStats st;

  // Zt_0 = 1 and Zt_n = Z_n + dA_n at every node
  for (std::size_t w = 0; w < W; ++w)
    if (an.Zt.values[0][w] != 1) {
      note(st, label, "Zt_0 != 1");
      break;
    }
  for (int n = 0; n <= N; ++n)
    for (std::size_t w = 0; w < W; ++w) {
      std::size_t sn = static_cast<std::size_t>(n);
      Rat dA = an.A.values[sn][w] - (n == 0 ? Rat(0) : an.A.values[sn - 1][w]);
      if (an.Zt.values[sn][w] != an.Z.values[sn][w] + dA) {
        std::ostringstream os;
        os << "Zt identity failed at period " << n << ", outcome " << w;
        note(st, label, os.str());
        n = N + 1;
        break;
      }
    }

  // M = Z + A and m = Z + a are exact martingales; a - A differences
  // vanish under the one-step-back projection
  for (bool b : martingale_steps(model, an.M))
    if (!b) {
      note(st, label, "M martingale step failed");
      break;
    }
  for (bool b : martingale_steps(model, an.m))
    if (!b) {
      note(st, label, "m martingale step failed");
      break;
    }
  AdaptedProcess diff = an.a;
  for (int n = 0; n <= N; ++n)
    for (std::size_t w = 0; w < W; ++w)
      diff.values[static_cast<std::size_t>(n)][w] -=
          an.A.values[static_cast<std::size_t>(n)][w];
  for (bool b : martingale_steps(model, diff))
    if (!b) {
      note(st, label, "predictable/optional compensator projections disagree");
      break;
    }

  // range and monotonicity sanity, Z stays at 0 once it hits 0
  bool range_ok = true, stay_ok = true;
  for (std::size_t w = 0; w < W && range_ok; ++w) {
    bool dead = false;
    for (int n = 0; n <= N; ++n) {
      std::size_t sn = static_cast<std::size_t>(n);
      const Rat& z = an.Z.values[sn][w];
      if (z < 0 || z > 1 || an.Zt.values[sn][w] < z) range_ok = false;
      if (dead && z != 0) stay_ok = false;
      if (z == 0) dead = true;
      if (n >= 1 && an.Z.values[sn - 1][w] == 1 && an.Zt.values[sn][w] != 1) {
        note(st, label, "Zt < 1 right after Z = 1");
        n = N + 1;
      }
    }
  }
  if (!range_ok) note(st, label, "Z/Zt out of range");
  if (!stay_ok) note(st, label, "Z left 0 after hitting it");

  // shadow inclusion variant {Z=1 or Z_-=1} in C: counted, not asserted
  for (int n = 0; n <= N; ++n)
    for (std::size_t w = 0; w < W; ++w) {
      std::size_t sn = static_cast<std::size_t>(n);
      bool touch = an.Z.values[sn][w] == 1 ||
                   (n >= 1 && an.Z.values[sn - 1][w] == 1);
      if (touch && !an.C[sn][w]) ++st.variant2;
    }

  st.honest = is_honest(model, rho, an);
  if (st.honest) {
    HonestSupportReport hs = honest_support_checks(model, rho, an);
    if (!hs.ok()) note(st, label, "honest support corollary failed");
  }

  MmrSearchResult sr = mmr_search(model, an.Z, an.A);
  if (sr.feasible) {
    st.feasible = true;
    std::ostringstream os;
    os << "mmr_search found a feasible gamma (unexpected)";
    if (st.notes.size() < 4) st.notes.push_back(label + ": " + os.str());
  } else if (sr.certificate.rhs <= 0) {
    note(st, label, "infeasibility certificate has nonpositive mass");
  }
  return st;
}

std::string tree_label(int N, const std::vector<Rat>& probs) {
  std::ostringstream os;
  os << "N=" << N << " p=(";
  for (std::size_t i = 0; i < probs.size(); ++i)
    os << (i ? "," : "") << probs[i];
  os << ")";
  return os.str();
}

std::string time_label(const FiniteRandomTime& rho) {
  std::ostringstream os;
  os << " rho=(";
  for (std::size_t i = 0; i < rho.value.size(); ++i)
    os << (i ? "," : "") << rho.value[i];
  os << ")";
  return os.str();
}

}  // namespace

FiniteSuiteReport run_finite_suite(const FiniteSuiteConfig& cfg) {
  if (cfg.max_periods < 1 || cfg.max_periods > 5)
    throw std::invalid_argument("run_finite_suite: max_periods must be in [1,5]");
  if (cfg.max_branching < 2 || cfg.max_branching > 3)
    throw std::invalid_argument("run_finite_suite: max_branching must be 2 or 3");

  const std::vector<Rat> prob_menu = {Rat(1, 2), Rat(1, 3), Rat(2, 3)};
  FiniteSuiteReport rep;
  std::uint64_t stream = 0;

  auto witness = [&rep](const std::vector<std::string>& notes) {
    for (const auto& n : notes)
      if (rep.witnesses.size() < 12) rep.witnesses.push_back(n);
  };

  auto handle = [&](const FiniteProbModel& model, const FiniteRandomTime& rho,
                    bool corrupt, const std::string& label,
                    const std::vector<FiniteRandomTime>* stopping_times,
                    int blind_check, int relative_pairs) {
    ++rep.cases;
    AzemaAnalysis an = azema_analysis(model, rho);
    if (corrupt) {
      AzemaAnalysis bad = an;
      bad.Zt.values[1][0] += Rat(1, 7);
      CaseStats st_bad = run_case(model, rho, bad, label + " [fault]");
      rep.identity_failures += st_bad.identity_failures;
      witness(st_bad.notes);
      if (st_bad.identity_failures == 0)
        witness({label + ": injected fault was not detected"});
    }
    CaseStats st = run_case(model, rho, an, label);
    rep.identity_failures += st.identity_failures;
    if (st.honest) ++rep.honest_count;
    if (st.feasible)
      ++rep.feasible_count;
    else
      ++rep.infeasible_count;
    rep.variant2_violations += st.variant2;
    witness(st.notes);

    if (blind_check) {
      bool blind = is_honest_blind(model, rho);
      if (blind != st.honest) {
        ++rep.honest_mismatches;
        witness({label + time_label(rho) + ": honest check disagreement"});
      }
    }

    if (relative_pairs > 0 && stopping_times && stopping_times->size() >= 2) {
      RngStream rng(cfg.seed, 1'000'000 + stream++, 7);
      const auto& sts = *stopping_times;
      bool exhaust = relative_pairs >= static_cast<int>(sts.size() * sts.size());
      long done = 0;
      auto check_pair = [&](const FiniteRandomTime& a, const FiniteRandomTime& b) {
        FiniteRandomTime S = a, T = b;
        for (std::size_t w = 0; w < S.value.size(); ++w) {
          S.value[w] = std::min(a.value[w], b.value[w]);
          T.value[w] = std::max(a.value[w], b.value[w]);
        }
        ++rep.relative_pairs_checked;
        ++done;
        // the pair identities characterize honest times: they hold for every
        // stopping-time pair iff rho is honest, so a failure is an error only
        // on honest cases
        if (!relative_martingale_check(model, an, S, T) && st.honest) {
          ++rep.identity_failures;
          witness({label + time_label(rho) +
                   ": relative martingale identity failed on honest case"});
        }
      };
      if (exhaust) {
        for (std::size_t i = 0; i < sts.size(); ++i)
          for (std::size_t j = i; j < sts.size(); ++j) check_pair(sts[i], sts[j]);
      } else {
        for (int k = 0; k < relative_pairs; ++k) {
          std::size_t i = rng.below(static_cast<std::uint32_t>(sts.size()));
          std::size_t j = rng.below(static_cast<std::uint32_t>(sts.size()));
          check_pair(sts[i], sts[j]);
        }
      }
      (void)done;
    }

    // converse route: every non-honest case must be refuted by the
    // deterministic pair S = rho(w*) - 1, T = N, where w* is the first
    // outcome with Zt != 1 at rho.  On that pair the Z identity needs the
    // shadow to be visited strictly between S and rho on w*, which never
    // happens because the shadow stops before rho there.
    if (!st.honest) {
      int nstar = -1;
      for (std::size_t w = 0; w < rho.value.size() && nstar < 0; ++w) {
        int r = rho.value[w];
        if (r >= 1 && r <= model.periods() &&
            an.Zt.values[static_cast<std::size_t>(r)][w] != 1)
          nstar = r - 1;
      }
      if (nstar >= 0) {
        FiniteRandomTime S, T;
        S.value.assign(rho.value.size(), nstar);
        T.value.assign(rho.value.size(), model.periods());
        ++rep.relative_pairs_checked;
        if (relative_martingale_check(model, an, S, T)) {
          ++rep.relative_unrefuted;
          witness({label + time_label(rho) +
                   ": relative identity missed a non-honest case"});
        } else {
          ++rep.relative_refuted;
        }
      }
    }
  };

  for (int N = 1; N <= cfg.max_periods; ++N) {
    // all per-level probability assignments from the menu, or the three
    // uniform trees at N = 5 to stay inside the case budget
    std::vector<std::vector<Rat>> assignments;
    if (N <= 4) {
      std::vector<int> idx(static_cast<std::size_t>(N), 0);
      while (true) {
        std::vector<Rat> pv;
        for (int i : idx) pv.push_back(prob_menu[static_cast<std::size_t>(i)]);
        assignments.push_back(pv);
        int i = 0;
        while (i < N) {
          if (idx[static_cast<std::size_t>(i)] < 2) {
            ++idx[static_cast<std::size_t>(i)];
            for (int j = 0; j < i; ++j) idx[static_cast<std::size_t>(j)] = 0;
            break;
          }
          ++i;
        }
        if (i == N) break;
      }
    } else {
      for (const Rat& p : prob_menu)
        assignments.emplace_back(static_cast<std::size_t>(N), p);
    }

    int tree_idx = 0;
    for (const auto& pv : assignments) {
      FiniteProbModel model = FiniteProbModel::tree(N, 2, pv);
      std::string label = tree_label(N, pv);
      std::vector<FiniteRandomTime> sts;
      if (N <= 4) sts = enumerate_stopping_times(model);

      bool exhaustive_times =
          N <= 2 || (N == 3 && std::all_of(pv.begin(), pv.end(),
                                           [](const Rat& p) { return p == Rat(1, 2); }));
      int blind_quota = N <= 2 ? 1 << 20 : (N == 3 ? 40 : 0);
      int pair_quota = N <= 2 ? 1 << 20 : (N == 3 ? 12 : (N == 4 ? 4 : 0));

      if (exhaustive_times) {
        FiniteRandomTime rho;
        rho.value.assign(static_cast<std::size_t>(model.n_outcomes()), 1);
        int used_blind = 0;
        do {
          bool corrupt = cfg.inject_fault && N == 2 && tree_idx == 0 &&
                         std::all_of(rho.value.begin(), rho.value.end(),
                                     [](int v) { return v == 1; });
          handle(model, rho, corrupt, label, &sts,
                 used_blind++ < blind_quota, pair_quota);
        } while (advance_time(rho, 1, N));
      } else {
        int n_sample = N == 3 ? 20 : (N == 4 ? 8 : 4);
        RngStream rng(cfg.seed, stream++, 3);
        for (int k = 0; k < n_sample; ++k) {
          FiniteRandomTime rho;
          rho.value.resize(static_cast<std::size_t>(model.n_outcomes()));
          for (auto& v : rho.value)
            v = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(N)));
          handle(model, rho, false, label, N <= 4 ? &sts : nullptr,
                 k < 2 && N == 3, pair_quota);
        }
      }
      ++tree_idx;
    }
  }

  if (cfg.max_branching >= 3 && cfg.max_periods >= 2) {
    for (const Rat& p : {Rat(1, 3), Rat(1, 2)}) {
      std::vector<Rat> pv = {p, p};
      FiniteProbModel model = FiniteProbModel::tree(2, 3, pv);
      std::string label = "ternary " + tree_label(2, pv);
      auto sts = enumerate_stopping_times(model);
      RngStream rng(cfg.seed, stream++, 5);
      for (int k = 0; k < 50; ++k) {
        FiniteRandomTime rho;
        rho.value.resize(static_cast<std::size_t>(model.n_outcomes()));
        for (auto& v : rho.value) v = 1 + static_cast<int>(rng.below(2));
        handle(model, rho, false, label, &sts, 0, 6);
      }
    }
  }

  return rep;
}

}  // namespace maxrep
