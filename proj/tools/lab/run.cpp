#include "lab/run.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "blowup/asymptotics.hpp"
#include "blowup/error.hpp"
#include "blowup/maxprinciple.hpp"
#include "blowup/pde_solver.hpp"
#include "blowup/radial_solver.hpp"
#include "blowup/sampling.hpp"
#include "json.hpp"
#include "lab/output.hpp"
#include "lab/svg.hpp"

namespace lab {

using nlohmann::json;

namespace {

json pairs(const std::vector<std::pair<double, double>>& v) {
  json out = json::array();
  for (const auto& [a, b] : v) out.push_back({a, b});
  return out;
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json to_json(const blowup::LimitEstimate& e) {
  json samples = json::array();
  for (const auto& s : e.samples) samples.push_back({{"t", s.t}, {"value", s.value}, {"log_value", s.log_value}});
  return {{"quantity", e.quantity},
          {"verdict", blowup::to_string(e.verdict)},
          {"passes", e.passes},
          {"fitted_slope", e.fitted_slope},
          {"semilog", e.semilog},
          {"threshold", e.threshold},
          {"note", e.note},
          {"samples", samples}};
}

json to_json(const blowup::MonotonicityVerdict& m) {
  return {{"holds", m.holds},
          {"shift_K", m.shift_K},
          {"shift_p", m.shift_p},
          {"witness", optional_json(m.witness)},
          {"window", {m.window_lo, m.window_hi}},
          {"min_slope", m.min_slope},
          {"tolerance", m.tolerance},
          {"samples", m.samples},
          {"exponential_shift", m.exponential_shift}};
}

json to_json(const blowup::HypothesisReport& r) {
  json j{{"nonlinearity", r.nonlinearity},
         {"threshold", r.threshold},
         {"t0", r.t0},
         {"ko", to_json(r.ko)},
         {"phi_convergence", to_json(r.phi_convergence)},
         {"shift_monotone", to_json(r.shift_monotone)},
         {"h2", to_json(r.h2)},
         {"h2_p", r.h2_p},
         {"exp_alpha", optional_json(r.exp_alpha)},
         {"gamma", optional_json(r.gamma)},
         {"missing_mass", r.missing_mass},
         {"theorem_applicable", r.theorem_applicable},
         {"exp_variant_applicable", r.exp_variant_applicable}};
  j["exp_shift_monotone"] = r.exp_shift_monotone ? to_json(*r.exp_shift_monotone) : json(nullptr);
  j["exp_variant"] = r.exp_variant ? to_json(*r.exp_variant) : json(nullptr);
  if (r.gamma_conditions) {
    j["gamma_conditions"] = {{"c1", to_json(r.gamma_conditions->c1)},
                             {"c2", to_json(r.gamma_conditions->c2)},
                             {"c3", to_json(r.gamma_conditions->c3)},
                             {"all_pass", r.gamma_conditions->all_pass()}};
  } else {
    j["gamma_conditions"] = nullptr;
  }
  return j;
}

json to_json(const blowup::BarrierSample& s) {
  return {{"x1", s.x1}, {"x2", s.x2},     {"U", s.U},
          {"omega", s.omega}, {"op", s.op}, {"requirement", s.requirement}, {"margin", s.margin}};
}

std::pair<double, double> finite_range(const std::vector<double>& v) {
  double lo = INFINITY, hi = -INFINITY;
  for (double x : v)
    if (std::isfinite(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  if (!(lo < hi)) {
    lo = std::isfinite(lo) ? lo - 0.5 : 0.0;
    hi = lo + 1.0;
  }
  return {lo, hi};
}

std::pair<double, double> positive_range(const std::vector<double>& v) {
  double lo = INFINITY, hi = 0.0;
  for (double x : v)
    if (std::isfinite(x) && x > 0.0) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  if (!(lo < hi)) return {1e-1, 1e1};
  return {std::pow(10.0, std::floor(std::log10(lo))), std::pow(10.0, std::ceil(std::log10(hi)))};
}

template <class Fn>
double or_nan(Fn&& fn) {
  try {
    return fn();
  } catch (const blowup::Error&) {
    return NAN;
  }
}

class Lab {
 public:
  Lab(const ExperimentConfig& cfg, OutputDir& out, std::ostream& log) : cfg_(cfg), out_(out), log_(log) {}

  bool hypotheses();
  void radial();
  void pde();
  void symmetry();
  void maxprinciple();

 private:
  const blowup::GrowthProfile& gp();
  const blowup::RadialSolution& ball();
  blowup::RadialOptions radial_options() const;
  blowup::DiskSolution solve(double M, double eps_b) const;
  const std::vector<std::pair<double, blowup::DiskSolution>>& disks();

  const ExperimentConfig& cfg_;
  OutputDir& out_;
  std::ostream& log_;
  std::optional<blowup::GrowthProfile> gp_;
  std::optional<blowup::RadialSolution> ball_;
  std::optional<std::vector<std::pair<double, blowup::DiskSolution>>> disks_;
};

const blowup::GrowthProfile& Lab::gp() {
  if (!gp_) {
    blowup::GrowthOptions o;
    o.t0 = cfg_.t0;
    o.quad_rel_tol = cfg_.quad_rel_tol;
    o.tail_cap = cfg_.tail_cap;
    o.check_cap = cfg_.check_cap;
    gp_.emplace(make_nonlinearity(cfg_), o);
  }
  return *gp_;
}

blowup::RadialOptions Lab::radial_options() const {
  blowup::RadialOptions o;
  o.eps_R = cfg_.eps_R;
  o.switch_d = cfg_.switch_d;
  o.rel_tol = cfg_.rel_tol;
  o.abs_tol = cfg_.abs_tol;
  return o;
}

const blowup::RadialSolution& Lab::ball() {
  if (!ball_) ball_.emplace(blowup::solve_unit_ball(gp(), cfg_.dimension, radial_options()));
  return *ball_;
}

blowup::DiskSolution Lab::solve(double M, double eps_b) const {
  const auto target = blowup::solve_dirichlet_radial(*gp_, 2, cfg_.radius, M, radial_options());
  const auto grid = blowup::PolarGrid::graded(cfg_.n_r, cfg_.n_theta, cfg_.radius, target);
  blowup::NewtonOptions o;
  o.rel_tol = cfg_.newton_rel_tol;
  return blowup::solve_disk(*gp_, M, eps_b, cfg_.mode, grid, o);
}

const std::vector<std::pair<double, blowup::DiskSolution>>& Lab::disks() {
  if (!disks_) {
    gp();
    disks_.emplace();
    for (double M : cfg_.truncation) {
      disks_->emplace_back(M, solve(M, cfg_.eps_b));
      const auto& s = disks_->back().second;
      log_ << "pde: M = " << format_number(M) << ", Newton residual " << s.newton_residual() << " after "
           << s.residual_history().size() << " iterations\n";
    }
  }
  return *disks_;
}

bool Lab::hypotheses() {
  blowup::HypothesisOptions o;
  o.shift_K = cfg_.shift_K;
  o.shift_p = cfg_.shift_p;
  o.window_lo = cfg_.window_lo;
  o.window_hi = cfg_.window_hi;
  o.p = cfg_.h2_p;
  o.exp_alpha = cfg_.exp_alpha;
  o.gamma = cfg_.gamma;
  const auto rep = blowup::evaluate_hypotheses(gp(), o);

  const auto& f = gp().nonlinearity();
  const double a = 0.5 * (cfg_.h2_p - 1.0);
  std::vector<double> ts = blowup::geometric_points(gp().t0(), gp().check_cap(), cfg_.samples_per_decade);
  std::vector<double> psi, phi, qh2, qexp;
  std::string csv = "t,F,psi,phi,Q_h2,Q_exp\n";
  for (double t : ts) {
    const double logF = or_nan([&] { return gp().log_F(t); });
    const double p1 = or_nan([&] { return gp().psi(t); });
    const double logphi = or_nan([&] { return gp().log_phi(t); });
    const double q = std::exp(a * std::log(t) + logphi - 0.5 * logF);
    const double qe = rep.exp_alpha ? std::exp(0.5 * *rep.exp_alpha * t + logphi - 0.5 * logF) : NAN;
    psi.push_back(p1);
    phi.push_back(std::exp(logphi));
    qh2.push_back(q);
    qexp.push_back(qe);
    csv += csv_number(t) + "," + csv_number(or_nan([&] { return f.antiderivative(t); })) + "," + csv_number(p1) +
           "," + csv_number(std::exp(logphi)) + "," + csv_number(q) + "," + csv_number(qe) + "\n";
  }
  out_.write("asymptotics.csv", csv);
  out_.write("hypotheses.json", to_json(rep).dump(2) + "\n");

  std::vector<double> all = psi;
  all.insert(all.end(), phi.begin(), phi.end());
  all.insert(all.end(), qh2.begin(), qh2.end());
  const auto [ylo, yhi] = positive_range(all);
  SvgPlot plot("psi, phi and the condition quotient", {ts.front(), ts.back(), true, "t"},
               {ylo, yhi, true, "value"});
  plot.line(ts, psi, "#1f77b4", "psi(t)");
  plot.line(ts, phi, "#d62728", "phi(t)");
  plot.line(ts, qh2, "#2ca02c", "t^((p-1)/2) phi/sqrt F");
  out_.write("asymptotics.svg", plot.str());

  log_ << "hypotheses: " << rep.nonlinearity << ": KO " << (rep.ko.passes ? "holds" : "fails") << ", shift monotone "
       << (rep.shift_monotone.holds ? "holds" : "fails") << ", growth condition "
       << (rep.h2.passes ? "holds" : "fails") << " -> theorem "
       << (rep.theorem_applicable ? "applicable" : "not applicable") << "\n";
  return rep.theorem_applicable;
}

void Lab::radial() {
  const auto& sol = ball();
  const auto rep = blowup::boundary_law_report(sol);
  const double t0 = gp().t0();

  std::string csv = "r,d,U,Uprime,psiU_over_d,Uprime_over_sqrtF\n";
  std::vector<double> ds, dist, slope;
  for (std::size_t i = 0; i < sol.r().size(); ++i) {
    const double r = sol.r()[i], U = sol.U()[i], V = sol.Uprime()[i];
    const double d = 1.0 - r;
    const double ratio = U >= t0 && d > 0.0 ? or_nan([&] { return gp().psi(U); }) / d : NAN;
    const double sq = V / std::exp(0.5 * gp().log_F(U));
    csv += csv_number(r) + "," + csv_number(d) + "," + csv_number(U) + "," + csv_number(V) + "," +
           csv_number(ratio) + "," + csv_number(sq) + "\n";
    if (d <= 0.1) {
      ds.push_back(d);
      dist.push_back(ratio);
      slope.push_back(sq);
    }
  }
  out_.write("radial.csv", csv);

  json j{{"dimension", sol.dimension()},
         {"center_value", sol.center_value()},
         {"blowup_radius", sol.blowup_radius_raw()},
         {"r_stop", sol.r_stop()},
         {"ode_residual_max", sol.residual_max()},
         {"distance_ratio", pairs(rep.distance_ratio)},
         {"slope_ratio", pairs(rep.slope_ratio)},
         {"power_rate", pairs(rep.power_rate)},
         {"distance_limit", rep.distance_limit},
         {"slope_limit", rep.slope_limit},
         {"power_constant", optional_json(rep.power_constant)},
         {"power_constant_expected", optional_json(rep.power_constant_expected)},
         {"distance_max_dev", rep.distance_max_dev},
         {"expected_slope", rep.expected_slope},
         {"constant_two_rejected", rep.constant_two_rejected},
         {"note", rep.note}};
  out_.write("radial_report.json", j.dump(2) + "\n");

  if (!ds.empty()) {
    std::vector<double> all = dist;
    all.insert(all.end(), slope.begin(), slope.end());
    const auto [ylo, yhi] = finite_range(all);
    SvgPlot plot("boundary ratios of the radial solution", {*std::min_element(ds.begin(), ds.end()), 0.1, true, "d = 1 - r"},
                 {std::min(ylo, 0.9), std::max(yhi, 1.5), false, "ratio"});
    plot.line(ds, dist, "#1f77b4", "psi(U)/d");
    plot.line(ds, slope, "#d62728", "U'/sqrt F(U)");
    plot.hline(1.0, "#1f77b4");
    plot.hline(std::numbers::sqrt2, "#d62728");
    out_.write("radial.svg", plot.str());
  }
  log_ << "radial: c = " << format_number(sol.center_value()) << ", psi(U)/d -> " << rep.distance_limit
       << ", U'/sqrt F -> " << rep.slope_limit << "\n";
}

void Lab::pde() {
  const auto& [M, sol] = disks().back();
  const auto& g = sol.grid();
  std::string csv = "r,theta,u\n";
  csv += csv_number(0.0) + "," + csv_number(0.0) + "," + csv_number(sol.at(0, 0)) + "\n";
  for (int i = 1; i <= g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j)
      csv += csv_number(g.r()[i]) + "," + csv_number(g.theta(j)) + "," + csv_number(sol.at(i, j)) + "\n";
  out_.write("disk_solution.csv", csv);

  const auto [vlo, vhi] = finite_range(sol.values());
  const double R = g.radius();
  SvgPlot plot("disk solution, M = " + format_number(M), {-R, R, false, "x1"}, {-R, R, false, "x2"}, 560, 460);
  for (int i = 0; i < g.n_r(); ++i) {
    for (int j = 0; j < g.n_theta(); ++j) {
      const int jn = (j + 1) % g.n_theta();
      const double t0 = g.theta(j), t1 = t0 + g.dtheta();
      const double r0 = g.r()[i], r1 = g.r()[i + 1];
      const double v = 0.25 * (sol.at(i, j) + sol.at(i, jn) + sol.at(i + 1, j) + sol.at(i + 1, jn));
      plot.polygon({{r0 * std::cos(t0), r0 * std::sin(t0)},
                    {r1 * std::cos(t0), r1 * std::sin(t0)},
                    {r1 * std::cos(t1), r1 * std::sin(t1)},
                    {r0 * std::cos(t1), r0 * std::sin(t1)}},
                   v, vlo, vhi);
    }
  }
  plot.colorbar(vlo, vhi, "u");
  out_.write("disk_solution.svg", plot.str());
}

void Lab::symmetry() {
  const auto& runs = disks();
  const blowup::RadialSolution* radial = nullptr;
  if (cfg_.radius < 1.0) radial = &ball();

  auto report_json = [&](double M, const blowup::DiskSolution& s) {
    const auto rep = blowup::symmetry_report(s, cfg_.lambdas, radial);
    json grad = json::array();
    for (const auto& gs : rep.gradient_diag)
      grad.push_back({{"d", gs.d}, {"tangential", gs.tangential}, {"radial", gs.radial}});
    const auto at = blowup::gradient_at(rep.gradient_diag, s.grid().radius(), 0.9 * s.grid().radius());
    return json{{"M", M},
                {"eps_b", s.eps_b()},
                {"mode", s.mode()},
                {"newton_residual", s.newton_residual()},
                {"residual_tolerance", s.residual_tolerance()},
                {"defect_by_radius", pairs(rep.defect_by_radius)},
                {"global_defect", rep.global_defect},
                {"movingplane_min", pairs(rep.movingplane_min)},
                {"interpolation_bound", rep.interpolation_bound},
                {"radial_monotonicity_min", rep.radial_monotonicity_min},
                {"comparison_ratio", pairs(rep.comparison_ratio)},
                {"comparison_constant", optional_json(rep.comparison_constant)},
                {"gradient_diag", grad},
                {"gradient_ratio_at_0_9", at.tangential / at.radial}};
  };

  json list = json::array();
  std::vector<double> defects, ratios;
  for (const auto& [M, s] : runs) {
    list.push_back(report_json(M, s));
    defects.push_back(list.back()["global_defect"].get<double>());
    ratios.push_back(list.back()["gradient_ratio_at_0_9"].get<double>());
  }
  auto decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1])) return false;
    return true;
  };
  const double M0 = runs.front().first;
  const auto control = solve(M0, 0.0);

  json j{{"lambdas", cfg_.lambdas},
         {"runs", list},
         {"symmetric_control", report_json(M0, control)},
         {"truncation_trend",
          {{"label", "exploratory: truncated problems with perturbed data are outside the theorem"},
           {"levels", cfg_.truncation},
           {"global_defect", defects},
           {"gradient_ratio_at_0_9", ratios},
           {"defect_decreasing", decreasing(defects)},
           {"ratio_decreasing", decreasing(ratios)}}}};
  out_.write("symmetry_report.json", j.dump(2) + "\n");

  std::vector<double> all;
  for (const auto& [M, s] : runs)
    for (const auto& [r, d] : blowup::symmetry_defect(s).by_radius) all.push_back(d);
  const auto [ylo, yhi] = finite_range(all);
  SvgPlot plot("angular defect max u - min u by radius", {0.0, cfg_.radius, false, "r"},
               {std::min(0.0, ylo), yhi, false, "defect"});
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::size_t k = 0;
  for (const auto& [M, s] : runs) {
    std::vector<double> rs, ds;
    for (const auto& [r, d] : blowup::symmetry_defect(s).by_radius) {
      rs.push_back(r);
      ds.push_back(d);
    }
    plot.line(rs, ds, colors[k++ % 6], "M = " + format_number(M));
  }
  out_.write("symmetry_defect.svg", plot.str());
  log_ << "symmetry: global defect";
  for (double d : defects) log_ << " " << d;
  log_ << (decreasing(defects) ? " (decreasing)" : " (not decreasing)") << "\n";
}

void Lab::maxprinciple() {
  blowup::BarrierOptions o;
  o.C_H = cfg_.C_H;
  o.samples = cfg_.lens_samples;
  o.refine = cfg_.refine;
  o.exponent = cfg_.exponent == "half" ? blowup::CoefficientExponent::half : blowup::CoefficientExponent::full;
  const auto br = blowup::barrier_report(gp(), ball(), cfg_.p, cfg_.lambda, cfg_.C0, o);
  const auto ez = blowup::euler_zeros(cfg_.euler_C0, cfg_.euler_a, cfg_.euler_b);

  json samples = json::array();
  for (const auto& s : br.samples) samples.push_back(to_json(s));
  json barrier{{"mu", br.mu},
               {"C0", br.C0},
               {"p", br.p},
               {"lambda", br.lambda},
               {"C_H", br.C_H},
               {"coefficient_exponent", br.coefficient_exponent},
               {"doublings", br.doublings},
               {"margin_reached", br.margin_reached},
               {"sample_counts", br.sample_counts},
               {"level_verdicts", br.level_verdicts},
               {"verdict", br.verdict},
               {"witness", br.witness ? to_json(*br.witness) : json(nullptr)},
               {"failure", br.failure},
               {"note", br.note},
               {"samples", samples}};
  json zeros = json::array();
  for (const auto& z : ez.zeros) zeros.push_back({{"k", z.k}, {"x", z.x}});
  json euler{{"C0", cfg_.euler_C0}, {"interval", {cfg_.euler_a, cfg_.euler_b}}, {"zeros", zeros}};
  euler["real_exponents"] =
      ez.real_exponents ? json{ez.real_exponents->first, ez.real_exponents->second} : json(nullptr);
  json j{{"barrier", barrier},
         {"euler", euler},
         {"euler_zero_count", ez.zeros.size()},
         {"parameters",
          {{"nonlinearity", gp().nonlinearity().describe()},
           {"dimension", cfg_.dimension},
           {"p", cfg_.p},
           {"C0", cfg_.C0},
           {"lambda", cfg_.lambda},
           {"C_H", cfg_.C_H},
           {"lens_samples", cfg_.lens_samples},
           {"refine", cfg_.refine},
           {"exponent", cfg_.exponent}}}};
  out_.write("barrier_report.json", j.dump(2) + "\n");

  std::string csv = "k,x_k\n";
  for (const auto& z : ez.zeros) csv += std::to_string(z.k) + "," + csv_number(z.x) + "\n";
  out_.write("euler_zeros.csv", csv);

  // lens samples against the normalized depth (x1 - lambda) / thickness
  std::vector<double> xs, depth, margin;
  for (std::size_t i = 0; i < br.samples.size();) {
    std::size_t e = i;
    double w = 0.0;
    while (e < br.samples.size() && br.samples[e].x2 == br.samples[i].x2) w = std::max(w, br.samples[e++].x1 - br.lambda);
    for (; i < e; ++i) {
      xs.push_back(br.samples[i].x2);
      depth.push_back(w > 0.0 ? (br.samples[i].x1 - br.lambda) / w : 0.0);
      margin.push_back(br.samples[i].margin);
    }
  }
  const auto [mlo, mhi] = finite_range(margin);
  const auto [xlo, xhi] = finite_range(xs);
  SvgPlot lens("operator / (C0 U^e) over the lens", {xlo, xhi, false, "x2"},
               {0.0, 1.0, false, "(x1 - lambda) / lens thickness"});
  lens.scatter(xs, depth, margin, mlo, mhi);
  lens.colorbar(mlo, mhi, "margin");
  out_.write("barrier_lens.svg", lens.str());

  std::vector<double> x = blowup::geometric_points(cfg_.euler_a, 1.0, 200), u;
  for (double t : x) u.push_back(blowup::euler_solution(cfg_.euler_C0, t));
  const auto [ulo, uhi] = finite_range(u);
  SvgPlot eu("solution of x^2 u'' + C0 u = 0", {x.front(), 1.0, true, "x"}, {ulo, uhi, false, "u"});
  eu.line(x, u, "#1f77b4", "u(x)");
  std::vector<double> zx, zy;
  for (const auto& z : ez.zeros) {
    zx.push_back(z.x);
    zy.push_back(0.0);
  }
  eu.markers(zx, zy, "#d62728", "zeros");
  eu.hline(0.0, "#888888");
  out_.write("euler_solution.svg", eu.str());

  log_ << "maxprinciple: mu = " << format_number(br.mu) << ", verdict " << (br.verdict ? "true" : "false")
       << (br.failure.empty() ? "" : " (" + br.failure + ")") << "; " << ez.zeros.size() << " Euler zeros\n";
}

}  // namespace

int run(const std::string& command, const ExperimentConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  static const std::vector<std::string> commands{"hypotheses", "radial", "pde", "symmetry", "maxprinciple", "all"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
    log << "error: unknown command '" << command << "'\n";
    return kConfigError;
  }
  std::optional<OutputDir> dir;
  int code = kSuccess;
  try {
    dir.emplace(out);
    Lab lab(cfg, *dir, log);
    if (command == "hypotheses") {
      code = lab.hypotheses() ? kSuccess : kHypothesesFail;
    } else if (command == "radial") {
      lab.radial();
    } else if (command == "pde") {
      lab.pde();
    } else if (command == "symmetry") {
      lab.symmetry();
    } else if (command == "maxprinciple") {
      lab.maxprinciple();
    } else if (!lab.hypotheses()) {
      log << "all: hypotheses fail; later stages skipped\n";
      code = kHypothesesFail;
    } else {
      lab.radial();
      lab.pde();
      lab.symmetry();
      lab.maxprinciple();
    }
  } catch (const blowup::ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    log << "error in " << command << ": " << e.what() << "\n";
    code = kFailure;
  }
  if (dir) {
    try {
      dir->write_manifest(command);
    } catch (const std::exception& e) {
      log << "error: " << e.what() << "\n";
      return kFailure;
    }
  }
  return code;
}

}  // namespace lab
