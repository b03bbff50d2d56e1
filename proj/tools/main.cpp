#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "morse_causal/morse_causal.hpp"

using namespace morse;

namespace {

enum Exit { kOk = 0, kNegative = 1, kError = 2 };

struct Globals {
  double b = 8.0;
  double zeta = 2.0;
  std::uint64_t seed = 0;
  std::string config;
};

// Fills options that were not given on the command line from a key = value
// file. Keys may use '-' or '_'.
void apply_config(CLI::App& app, CLI::App* sub, const std::string& path) {
  const auto bytes = read_file(path);
  const auto entries = parse_config(std::string(bytes.begin(), bytes.end()));
  for (const auto& [raw, value] : entries) {
    std::string key = raw;
    for (auto& c : key)
      if (c == '_') c = '-';
    CLI::Option* opt = sub ? sub->get_option_no_throw("--" + key) : nullptr;
    if (!opt) opt = app.get_option_no_throw("--" + key);
    if (!opt) throw Error(ErrorKind::Parse, "config: unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

PlanePoint named_point(const std::string& s) {
  if (s == "q") return kQProjection;
  if (s == "p") return kPProjection;
  double x = 0, y = 0;
  char comma = 0;
  std::istringstream in(s);
  if (!(in >> x >> comma >> y) || comma != ',' || !in.eof())
    throw Error(ErrorKind::Parse, "expected p, q or x1,x2 but got '" + s + "'");
  return {x, y};
}

void emit(const std::string& out, const std::string& data) {
  if (out.empty() || out == "-")
    std::fwrite(data.data(), 1, data.size(), stdout);
  else
    write_file(out, data);
}

struct ClassifyArgs {
  std::vector<double> point, vec, point4, vec4;
};

int run_classify(const MorseChart& chart, const ClassifyArgs& a) {
  if (!a.point4.empty()) {
    if (a.vec4.size() != 4) throw Error(ErrorKind::Parse, "--point4 needs --vec4");
    const Point4 z{a.point4[0], a.point4[1], a.point4[2], a.point4[3]};
    const Vec4 v{a.vec4[0], a.vec4[1], a.vec4[2], a.vec4[3]};
    const auto c = classify4(chart, z, v);
    std::printf("class %s\nmargin %.17g\n", to_string(c.cls), c.margin);
    return kOk;
  }
  if (a.point.size() != 2 || a.vec.size() != 2)
    throw Error(ErrorKind::Parse, "classify needs --point and --vec, or --point4 and --vec4");
  const PlanePoint p{a.point[0], a.point[1]};
  const PlaneVec v{a.vec[0], a.vec[1]};
  const auto c = classify_plane(chart, p, v);
  std::printf("class %s\nmargin %.17g\nregion %s\nbarrier %s\n", to_string(c.cls),
              c.margin, to_string(classify_region(chart, p)),
              to_string(barrier_sign(chart, p, v)));
  return kOk;
}

struct RegionsArgs {
  std::string trace = "oval";
  int n = 2000;
  std::string out;
};

int run_regions(const MorseChart& chart, const RegionsArgs& a) {
  const auto [lo, hi] = beta_roots(chart.b());
  std::fprintf(stderr, "beta_lower %.9g beta_upper %.9g\n", lo, hi);
  const auto tr = trace_boundary(chart, parse_component(a.trace), a.n);
  double worst = 0.0;
  for (const auto& s : tr.samples) worst = std::max(worst, std::abs(s.residual));
  std::fprintf(stderr, "%s: %zu samples, max |residual| %.3g\n", to_string(tr.component),
               tr.samples.size(), worst);
  emit(a.out, trace_csv(tr));
  return kOk;
}

struct BarrierArgs {
  AssembleOptions opt;
  std::string construction = "field";
  std::string out;
};

int run_barrier(const MorseChart& chart, BarrierArgs a) {
  a.opt.b = chart.b();
  a.opt.construction = parse_construction(a.construction);
  require_zeta2(chart, "barrier");
  const auto cert = assemble_barrier(a.opt);
  std::printf("verdict %s\nsign %s\nmin_margin %.6g\nargmin %s t=%.6g\n",
              to_string(cert.verdict), to_string(cert.sign), cert.min_margin,
              cert.argmin_piece.c_str(), cert.argmin_t);
  for (const auto& [k, ok] : cert.checks)
    std::printf("check %s %s\n", k.c_str(), ok ? "ok" : "failed");
  for (const auto& p : cert.pieces)
    std::printf("piece %s min %.6g at t=%.6g\n", p.name.c_str(), p.min_residual, p.argmin_t);
  if (!a.out.empty()) write_file(a.out, certificate_json(cert));
  return cert.verified() ? kOk : kNegative;
}

struct ThresholdArgs {
  ThresholdOptions opt;
  std::string construction = "field";
};

int run_threshold(const MorseChart& chart, ThresholdArgs a) {
  require_zeta2(chart, "threshold");
  a.opt.construction = parse_construction(a.construction);
  try {
    const auto r = threshold_search(a.opt);
    std::printf("bracket [%.6g, %.6g]\nevaluations %d\n", r.b_lo, r.b_hi, r.evaluations);
    std::printf("witness b=%.6g beta=%.6g a_hyp=%g a_interp=%g\n", r.witness.b,
                r.witness.beta_target, r.witness.a_hyp, r.witness.a_interp);
    return kOk;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoVerifiedPoint) throw;
    std::printf("%s\n", e.what());
    return kNegative;
  }
}

struct ReachArgs {
  std::string seed_at = "q";
  std::string against;
  bool past = false, future = false, outer = false;
  int res = 800;
  double margin = 0.01;
  std::vector<double> domain{-4, 4, -4, 4};
  std::string out, csv;
};

int run_reach(const MorseChart& chart, const ReachArgs& a) {
  if (a.past == a.future) throw Error(ErrorKind::Parse, "reach needs exactly one of --past, --future");
  if (a.domain.size() != 4) throw Error(ErrorKind::Parse, "--domain takes xmin,xmax,ymin,ymax");
  const Orientation o = a.past ? Orientation::Past : Orientation::Future;
  const Approximation ap = a.outer ? Approximation::Outer : Approximation::Inner;
  const Domain d{a.domain[0], a.domain[1], a.domain[2], a.domain[3]};
  const auto g = reach_grid(chart, named_point(a.seed_at), o, d, a.res, a.res, a.margin, ap);
  std::printf("reached %zu of %zu\n", g.count(), g.labels.size());
  if (!a.out.empty()) write_file(a.out, encode_rle(g));
  if (!a.csv.empty()) write_file(a.csv, grid_csv(g));
  if (a.against.empty()) return kOk;
  const auto h = reach_grid(chart, named_point(a.against), o, d, a.res, a.res, a.margin, ap);
  const std::size_t shared = shared_cells(g, h);
  std::printf("against reached %zu\nshared %zu\nonly_seed %zu\n", h.count(), shared,
              g.count() - shared);
  return shared == 0 ? kOk : kNegative;
}

struct AppendixArgs {
  int points = 1000;
  int curves = 1000;
};

int run_appendix(const MorseChart& chart, const AppendixArgs& a, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  bool all = true;
  auto report = [&](const char* name, bool ok, double value) {
    std::printf("%s %s (%.3g)\n", ok ? "PASS" : "FAIL", name, value);
    all &= ok;
  };

  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int k = 0; k < a.points; ++k) {
    const Point4 z{nd(rng), nd(rng), nd(rng), nd(rng)};
    const Vec4 x = xf_field(chart, z);
    worst = std::max(worst, std::abs(metric_g(chart, z, x, x) - (1.0 - chart.zeta())));
  }
  report("xf_speed", worst <= 1e-12, worst);

  const double bound = std::sqrt(chart.zeta() - 1.0) * 2.0;
  double longest = 0.0;
  for (int k = 0; k < a.curves; ++k)
    longest = std::max(longest, g_length(chart, random_timelike_curve(chart, -1.0, 1.0, rng)));
  report("length_bound", longest <= bound + 1e-9, longest - bound);

  const auto line = gradient_line(chart, random_on_level(chart, -1.0, rng), 1.0, 20000);
  const double gap = std::abs(g_length(chart, line) - bound);
  report("gradient_line_attains", gap <= 1e-6, gap);

  double drift = 0.0;
  for (int k = 0; k < a.points; ++k) {
    const Point4 z{nd(rng), nd(rng), nd(rng), nd(rng)};
    const double t = 0.5 * nd(rng);
    const Point4 w = gradient_flow(chart, z, t);
    drift = std::max(drift, std::abs(w[0] * w[2] - z[0] * z[2]) /
                                std::max(1.0, std::abs(z[0] * z[2])));
  }
  report("flow_hyperbolas", drift <= 1e-9, drift);
  return all ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal structure of anisotropic Morse spacetimes"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--b", g.b, "Anisotropy of the stable block")->capture_default_str();
  app.add_option("--zeta", g.zeta, "Cone parameter")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--config", g.config, "Flat key = value file; flags override it");

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Causal class of a vector");
  classify->add_option("--point", ca.point, "x1,x2")->delimiter(',')->expected(2);
  classify->add_option("--vec", ca.vec, "v1,v2")->delimiter(',')->expected(2);
  classify->add_option("--point4", ca.point4, "x1,x2,y1,y2")->delimiter(',')->expected(4);
  classify->add_option("--vec4", ca.vec4, "four components")->delimiter(',')->expected(4);

  RegionsArgs ra;
  auto* regions = app.add_subcommand("regions", "Trace a boundary component as CSV");
  regions->add_option("--trace", ra.trace, "oval, right, left, top or bottom")->capture_default_str();
  regions->add_option("--n", ra.n, "Samples")->capture_default_str();
  regions->add_option("--out", ra.out, "CSV path (default stdout)");

  BarrierArgs ba;
  auto* barrier = app.add_subcommand("barrier", "Assemble and certify the barrier");
  barrier->add_option("--a-interp", ba.opt.a_interp)->capture_default_str();
  barrier->add_option("--a-hyp", ba.opt.a_hyp)->capture_default_str();
  barrier->add_option("--beta", ba.opt.beta_target)->capture_default_str();
  barrier->add_option("--t-max", ba.opt.t_max)->capture_default_str();
  barrier->add_option("--n", ba.opt.n, "Samples per piece")->capture_default_str();
  barrier->add_option("--departure-fraction", ba.opt.departure_fraction)->capture_default_str();
  barrier->add_option("--construction", ba.construction, "field or literal")->capture_default_str();
  barrier->add_option("--out", ba.out, "JSON certificate path");

  ThresholdArgs ta;
  auto* threshold = app.add_subcommand("threshold", "Bracket the smallest certified b");
  threshold->add_option("--lo", ta.opt.b_lo)->capture_default_str();
  threshold->add_option("--hi", ta.opt.b_hi)->capture_default_str();
  threshold->add_option("--tol", ta.opt.tolerance)->capture_default_str();
  threshold->add_option("--samples", ta.opt.samples)->capture_default_str();
  threshold->add_option("--construction", ta.construction)->capture_default_str();

  ReachArgs rr;
  auto* reach = app.add_subcommand("reach", "Discrete past or future on a grid");
  reach->add_option("--seed-at", rr.seed_at, "p, q or x1,x2")->capture_default_str();
  reach->add_option("--against", rr.against, "Second seed; report shared cells");
  reach->add_flag("--past", rr.past);
  reach->add_flag("--future", rr.future);
  reach->add_flag("--outer", rr.outer, "Outer approximation");
  reach->add_option("--res", rr.res, "Cells per side")->capture_default_str();
  reach->add_option("--margin", rr.margin, "Cone margin in radians")->capture_default_str();
  reach->add_option("--domain", rr.domain, "xmin,xmax,ymin,ymax")->delimiter(',')->expected(4);
  reach->add_option("--out", rr.out, "RLE grid path");
  reach->add_option("--csv", rr.csv, "CSV grid path");

  AppendixArgs aa;
  auto* appendix = app.add_subcommand("appendix", "Gradient-line length checks");
  appendix->add_option("--points", aa.points)->capture_default_str();
  appendix->add_option("--curves", aa.curves)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!g.config.empty()) apply_config(app, sub, g.config);
    const MorseChart chart = MorseChart::make(g.b, g.zeta);
    if (sub == classify) return run_classify(chart, ca);
    if (sub == regions) return run_regions(chart, ra);
    if (sub == barrier) return run_barrier(chart, ba);
    if (sub == threshold) return run_threshold(chart, ta);
    if (sub == reach) return run_reach(chart, rr);
    if (sub == appendix) return run_appendix(chart, aa, g.seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}
