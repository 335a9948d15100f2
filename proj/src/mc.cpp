#include "maxrep/mc.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace maxrep {

const CadlagPath& PathBundle::path(const std::string& name) const {
  auto it = paths.find(name);
  if (it == paths.end())
    throw std::invalid_argument("PathBundle: no path named " + name);
  return it->second;
}

double PathBundle::scalar(const std::string& name) const {
  auto it = scalars.find(name);
  if (it == scalars.end())
    throw std::invalid_argument("PathBundle: no scalar named " + name);
  return it->second;
}

CadlagPath simulate_poisson(double rate, double horizon, RngStream& rng) {
  if (!(rate > 0.0))
    throw std::invalid_argument("simulate_poisson: rate must be positive");
  PathBuilder b(0.0, horizon, TailMode::Truncated);
  double t = 0.0;
  double level = 0.0;
  while (true) {
    t += rng.exponential(rate);
    if (t > horizon) break;
    level += 1.0;
    b.append(t, level, EventKind::Jump);
  }
  return std::move(b).build();
}

double ks_exp_statistic(std::vector<double> sample, double rate) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double cdf = 1.0 - std::exp(-rate * sample[i]);
    double lo = static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::fabs(cdf - lo), std::fabs(cdf - hi)});
  }
  return d;
}

namespace {

double max_upto(const CadlagPath& p, double s) {
  double m = p.initial_value();
  for (const auto& e : p.events()) {
    if (e.time > s) break;
    m = std::max(m, e.value);
  }
  return std::max(m, p.interp_value_at(s));
}

}  // namespace

MartingaleTestReport empirical_martingale_test(
    const Ensemble& ensemble, const std::string& process_name,
    const std::vector<double>& checkpoints, double k) {
  if (checkpoints.size() < 2)
    throw std::invalid_argument(
        "empirical_martingale_test: need at least two checkpoints");
  for (double s : checkpoints)
    if (s > ensemble.horizon)
      throw std::invalid_argument(
          "empirical_martingale_test: checkpoint beyond horizon");

  const std::size_t n = ensemble.bundles.size();
  // Median threshold for the indicator weight comes from a disjoint prefix
  // so the weight stays a fixed adapted functional on the test population.
  const std::size_t n_cal = std::min<std::size_t>(
      std::max<std::size_t>(n / 8, std::min<std::size_t>(n / 2, 32)), 512);

  MartingaleTestReport report;
  report.process = process_name;
  report.k = k;

  for (std::size_t ci = 0; ci + 1 < checkpoints.size(); ++ci) {
    double s = checkpoints[ci];
    double t = checkpoints[ci + 1];

    std::vector<double> cal_max;
    cal_max.reserve(n_cal);
    for (std::size_t i = 0; i < n_cal; ++i)
      cal_max.push_back(max_upto(ensemble.bundles[i].path(process_name), s));
    std::sort(cal_max.begin(), cal_max.end());
    double median =
        cal_max.empty() ? 0.0 : cal_max[(cal_max.size() - 1) / 2];

    struct Weight {
      const char* name;
      bool needs_cal;
    };
    static constexpr Weight kWeights[] = {{"const_1", false},
                                          {"value_at_s", false},
                                          {"max_le_median", true},
                                          {"sin_value_at_s", false}};
    for (const auto& w : kWeights) {
      std::size_t first = w.needs_cal ? n_cal : 0;
      KahanSum sum, sumsq;
      long m = 0;
      for (std::size_t i = first; i < n; ++i) {
        const CadlagPath& x = ensemble.bundles[i].path(process_name);
        double xs = x.interp_value_at(s);
        double xt = x.interp_value_at(t);
        double h;
        if (w.name[0] == 'c')
          h = 1.0;
        else if (w.name[0] == 'v')
          h = xs;
        else if (w.name[0] == 'm')
          h = max_upto(x, s) <= median ? 1.0 : 0.0;
        else
          h = std::sin(xs);
        double term = (xt - xs) * h;
        sum.add(term);
        sumsq.add(term * term);
        ++m;
      }
      MartingaleCheck chk;
      chk.s = s;
      chk.t = t;
      chk.functional = w.name;
      chk.n = m;
      double mean = sum.value() / static_cast<double>(m);
      double var =
          std::max(0.0, sumsq.value() / static_cast<double>(m) - mean * mean);
      chk.estimate = mean;
      chk.se = std::sqrt(var / static_cast<double>(m));
      chk.pass = chk.se > 0.0 ? std::fabs(chk.estimate) <= k * chk.se
                              : chk.estimate == 0.0;
      report.all_pass = report.all_pass && chk.pass;
      report.checks.push_back(chk);
    }
  }
  return report;
}

void parallel_for_paths(std::size_t n, int threads,
                        const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int n_workers = std::min<int>(threads, static_cast<int>(n));
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace maxrep
