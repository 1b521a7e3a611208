// Command-line front end: critical graphs, short-trajectory certificates,
// period integrals, the Laguerre/Jacobi families, parameter sweeps and
// figure emission.

#include <algorithm>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>

#include "CLI11.hpp"
#include "qdiff/algebra.hpp"
#include "qdiff/detector.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/families.hpp"
#include "qdiff/json_io.hpp"
#include "qdiff/periods.hpp"
#include "qdiff/polygon.hpp"
#include "qdiff/svg.hpp"
#include "qdiff/tracer.hpp"

namespace {

using qdiff::Complex;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;  // certified-absent / failed check
constexpr int kExitBadInput = 2;
constexpr int kExitFailure = 3;  // numeric failure / unresolved

struct CommonOpts {
  std::string json_path;
  std::string out_path;
  double hit_radius = 0.0;
  double escape_radius = 0.0;
  double max_phi = 0.0;
  double tol = 1e-6;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool with_out = true) {
  cmd->add_option("--json", c.json_path, "Write the JSON report to this path");
  if (with_out) cmd->add_option("--out", c.out_path, "Write an SVG figure to this path");
  cmd->add_option("--hit-radius", c.hit_radius, "Hit radius override");
  cmd->add_option("--escape-radius", c.escape_radius, "Escape radius override");
  cmd->add_option("--max-phi", c.max_phi, "Phi-length budget override");
  cmd->add_option("--tol", c.tol, "Tolerance for checks and set matching");
}

qdiff::TraceOptions trace_options(const CommonOpts& c) {
  qdiff::TraceOptions o;
  o.hit_radius = c.hit_radius;
  o.escape_radius = c.escape_radius;
  o.max_phi_length = c.max_phi;
  return o;
}

Complex parse_complex_arg(const std::string& text) {
  auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return Complex(std::stod(text), 0.0);
    return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
  } catch (const std::exception&) {
    throw qdiff::ParseError("expected a complex parameter as \"re\" or \"re,im\": " + text);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qdiff::ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qdiff::ParseError("cannot write " + path);
  out << content;
}

void deliver(const CommonOpts& c, const std::string& json) {
  if (!c.json_path.empty())
    write_file(c.json_path, json);
  else
    std::cout << json;
}

std::vector<Complex> sorted_zeros(const qdiff::FactoredRational& q) {
  auto zs = q.zeros();
  std::sort(zs.begin(), zs.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return zs;
}

// Strip one trailing newline so reports nest inside a combined object.
std::string chomp(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

struct GraphArgs {
  std::string spec;
  bool background = false;
  int resolution = 900;
  CommonOpts common;
};

int cmd_graph(const GraphArgs& a) {
  qdiff::FactoredRational q = qdiff::rational_from_json(read_file(a.spec));
  qdiff::CriticalGraph g;
  try {
    g = qdiff::critical_graph(q, trace_options(a.common));
  } catch (const qdiff::Error& e) {
    std::cerr << "trace failure: " << e.what() << "\n";
    return kExitFailure;
  }
  deliver(a.common, qdiff::to_json(g));
  if (!a.common.out_path.empty()) {
    qdiff::RenderSpec spec;
    spec.background_field = a.background;
    spec.resolution = a.resolution;
    write_file(a.common.out_path, qdiff::render_svg(q, g, spec));
  }
  return kExitOk;
}

struct ShortArgs {
  std::string spec;
  int from = -1, to = -1;
  CommonOpts common;
};

int cmd_short(const ShortArgs& a) {
  qdiff::FactoredRational q = qdiff::rational_from_json(read_file(a.spec));
  auto zs = sorted_zeros(q);
  if (a.from < 0 || a.to < 0 || a.from >= static_cast<int>(zs.size()) ||
      a.to >= static_cast<int>(zs.size()) || a.from == a.to) {
    std::cerr << "zero index out of range (have " << zs.size() << " zeros)\n";
    return kExitBadInput;
  }
  auto rep = qdiff::find_short_trajectory(q, zs[a.from], zs[a.to], trace_options(a.common));
  deliver(a.common, qdiff::to_json(rep));
  if (rep.found) return kExitOk;
  return rep.resolved ? kExitNegative : kExitFailure;
}

struct PeriodArgs {
  std::string spec, arc, side;
  bool closed = false, condition = false, residue = false;
  CommonOpts common;
};

int cmd_period(const PeriodArgs& a) {
  qdiff::FactoredRational f = qdiff::rational_from_json(read_file(a.spec));
  if (a.residue) {
    Complex r = qdiff::residue_at_infinity_sqrt(f);
    std::ostringstream ss;
    ss << "{\n  \"residue_at_infinity\": [" << r.real() << ", " << r.imag() << "]\n}\n";
    deliver(a.common, ss.str());
    return kExitOk;
  }
  if (a.arc.empty()) {
    std::cerr << "period: --arc is required unless --residue-infinity is given\n";
    return kExitBadInput;
  }
  qdiff::OrientedArc arc = qdiff::arc_from_json(read_file(a.arc));
  if (!a.side.empty()) {
    if (a.side == "plus")
      arc.side = qdiff::Side::Plus;
    else if (a.side == "minus")
      arc.side = qdiff::Side::Minus;
    else if (a.side == "off")
      arc.side = qdiff::Side::Off;
    else
      throw qdiff::ParseError("--side must be plus|minus|off");
  }
  if (a.condition) {
    auto rep = qdiff::condition_check(f, arc, a.common.tol);
    deliver(a.common, qdiff::to_json(rep));
    return rep.passes ? kExitOk : kExitNegative;
  }
  Complex value;
  if (a.closed) {
    value = qdiff::contour_integral_sqrt(f, arc);
  } else {
    std::size_t mid = (arc.vertices.size() - 1) / 2;
    Complex anchor = 0.5 * (arc.vertices[mid] + arc.vertices[mid + 1]);
    value = qdiff::integrate_sqrt(f, arc, qdiff::principal_branch(f, anchor));
  }
  std::ostringstream ss;
  ss << "{\n  \"value\": [" << value.real() << ", " << value.imag() << "]\n}\n";
  deliver(a.common, ss.str());
  return kExitOk;
}

struct FamilyArgs {
  bool laguerre = true;
  std::string C, A, B;
  bool quantize = false, background = false;
  int overlay = 0;
  double tube = 0.1;
  CommonOpts common;
};

int cmd_family(const FamilyArgs& a) {
  Complex C(0, 0), A(0, 0), B(0, 0), za, zb;
  std::optional<qdiff::FactoredRational> q;
  if (a.laguerre) {
    C = parse_complex_arg(a.C);
    q = qdiff::laguerre_qd({C});
    std::tie(za, zb) = qdiff::laguerre_zeros(C);
  } else {
    A = parse_complex_arg(a.A);
    B = parse_complex_arg(a.B);
    q = qdiff::jacobi_qd({A, B});
    std::tie(za, zb) = qdiff::jacobi_zeros(A, B);
  }

  auto opts = trace_options(a.common);
  auto graph = qdiff::critical_graph(*q, opts);
  auto report = qdiff::find_short_trajectory(*q, za, zb, opts);

  std::ostringstream combined;
  combined << "{\n\"report\": " << chomp(qdiff::to_json(report));

  if (a.quantize) {
    qdiff::OrientedArc arc;
    arc.side = qdiff::Side::Plus;
    if (report.found) {
      arc.vertices = report.trajectory->vertices;
      // Orient the arc from zb to za.
      if (std::abs(arc.vertices.front() - za) < std::abs(arc.vertices.front() - zb))
        std::reverse(arc.vertices.begin(), arc.vertices.end());
    } else {
      arc.vertices = {zb, za};
    }
    auto quant = a.laguerre ? qdiff::laguerre_quantization(C, arc, a.common.tol)
                            : qdiff::jacobi_quantization(A, B, arc, a.common.tol);
    combined << ",\n\"quantization\": " << chomp(qdiff::to_json(quant));
  }

  std::vector<Complex> overlay;
  if (a.overlay > 0) {
    double imag_mag = a.laguerre ? std::abs(C.imag())
                                 : std::max(std::abs(A.imag()), std::abs(B.imag()));
    if (imag_mag > 1e-12)
      throw qdiff::ParseError("--overlay-zeros requires real family parameters");
    overlay = a.laguerre ? qdiff::laguerre_polynomial_zeros(a.overlay, C.real())
                         : qdiff::jacobi_polynomial_zeros(a.overlay, A.real(), B.real());
    qdiff::Trajectory segment;
    if (report.found)
      segment = *report.trajectory;
    else
      segment.vertices = {zb, za};
    auto ov = qdiff::zero_measure_overlay(overlay, segment, a.tube);
    combined << ",\n\"overlay\": " << chomp(qdiff::to_json(ov));
  }
  combined << "\n}\n";

  deliver(a.common, combined.str());
  if (!a.common.out_path.empty()) {
    qdiff::RenderSpec spec;
    spec.background_field = a.background;
    write_file(a.common.out_path, qdiff::render_svg(*q, graph, spec, overlay));
  }
  return kExitOk;
}

struct SweepArgs {
  std::string family, from, to, B;
  int samples = 25;
  CommonOpts common;
};

int cmd_sweep(const SweepArgs& a) {
  Complex from = parse_complex_arg(a.from), to = parse_complex_arg(a.to);
  qdiff::SweepResult result;
  if (a.family == "laguerre") {
    result = qdiff::sweep_laguerre(from, to, a.samples, trace_options(a.common));
  } else if (a.family == "jacobi") {
    if (a.B.empty()) throw qdiff::ParseError("sweep --family jacobi requires --B");
    result = qdiff::sweep_jacobi(from, to, parse_complex_arg(a.B), a.samples,
                                 trace_options(a.common));
  } else {
    throw qdiff::ParseError("--family must be laguerre or jacobi");
  }
  deliver(a.common, qdiff::to_json(result));
  return result.dichotomy_ok ? kExitOk : kExitNegative;
}

struct CheckArgs {
  std::string polygon;
  CommonOpts common;
};

int cmd_check(const CheckArgs& a) {
  qdiff::PolygonData p = qdiff::polygon_from_json(read_file(a.polygon));
  double residual = qdiff::teichmuller_residual(p);
  bool passes = std::abs(residual) <= std::max(a.common.tol, 1e-9);
  std::ostringstream ss;
  ss << "{\n  \"residual\": " << residual << ",\n  \"passes\": " << (passes ? "true" : "false")
     << "\n}\n";
  deliver(a.common, ss.str());
  return passes ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critical graphs, short trajectories and periods of rational "
               "quadratic differentials"};
  app.require_subcommand(1);

  GraphArgs graph_args;
  auto* graph_cmd = app.add_subcommand("graph", "Trace the critical graph of a differential");
  graph_cmd->add_option("--spec", graph_args.spec, "FactoredRational JSON file")->required();
  graph_cmd->add_flag("--background", graph_args.background, "Seed a context field");
  graph_cmd->add_option("--resolution", graph_args.resolution, "SVG pixel width");
  add_common(graph_cmd, graph_args.common);

  ShortArgs short_args;
  auto* short_cmd = app.add_subcommand("short", "Certify a short trajectory between two zeros");
  short_cmd->add_option("--spec", short_args.spec)->required();
  short_cmd->add_option("--from", short_args.from, "Zero index (sorted by re, im)")->required();
  short_cmd->add_option("--to", short_args.to, "Zero index (sorted by re, im)")->required();
  add_common(short_cmd, short_args.common, false);

  PeriodArgs period_args;
  auto* period_cmd = app.add_subcommand("period", "Integrate sqrt(f) over an arc or contour");
  period_cmd->add_option("--spec", period_args.spec)->required();
  period_cmd->add_option("--arc", period_args.arc, "OrientedArc JSON file");
  period_cmd->add_option("--side", period_args.side, "Override the side: plus|minus|off");
  period_cmd->add_flag("--closed", period_args.closed, "Treat the arc as a closed contour");
  period_cmd->add_flag("--condition", period_args.condition, "Vanishing-real-part check");
  period_cmd->add_flag("--residue-infinity", period_args.residue,
                       "Residue of sqrt(spec) at infinity (even-degree polynomial)");
  add_common(period_cmd, period_args.common, false);

  FamilyArgs lag_args;
  lag_args.laguerre = true;
  auto* lag_cmd = app.add_subcommand("laguerre", "First-kind family driver");
  lag_cmd->add_option("--C", lag_args.C, "Parameter C as \"re\" or \"re,im\"")->required();
  lag_cmd->add_flag("--quantize", lag_args.quantize, "Quantized period over the detected arc");
  lag_cmd->add_option("--overlay-zeros", lag_args.overlay, "Overlay degree-n polynomial zeros");
  lag_cmd->add_option("--tube", lag_args.tube, "Overlay tube radius");
  lag_cmd->add_flag("--background", lag_args.background);
  add_common(lag_cmd, lag_args.common);

  FamilyArgs jac_args;
  jac_args.laguerre = false;
  auto* jac_cmd = app.add_subcommand("jacobi", "Second-kind family driver");
  jac_cmd->add_option("--A", jac_args.A)->required();
  jac_cmd->add_option("--B", jac_args.B)->required();
  jac_cmd->add_flag("--quantize", jac_args.quantize);
  jac_cmd->add_option("--overlay-zeros", jac_args.overlay);
  jac_cmd->add_option("--tube", jac_args.tube);
  jac_cmd->add_flag("--background", jac_args.background);
  add_common(jac_cmd, jac_args.common);

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Detector sweep along a parameter path");
  sweep_cmd->add_option("--family", sweep_args.family, "laguerre|jacobi")->required();
  sweep_cmd->add_option("--from", sweep_args.from)->required();
  sweep_cmd->add_option("--to", sweep_args.to)->required();
  sweep_cmd->add_option("--B", sweep_args.B, "Fixed B (jacobi)");
  sweep_cmd->add_option("--samples", sweep_args.samples);
  add_common(sweep_cmd, sweep_args.common, false);

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "Polygon angle-sum identity checker");
  check_cmd->add_option("--teichmuller", check_args.polygon, "PolygonData JSON file")
      ->required();
  add_common(check_cmd, check_args.common, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*graph_cmd) return cmd_graph(graph_args);
    if (*short_cmd) return cmd_short(short_args);
    if (*period_cmd) return cmd_period(period_args);
    if (*lag_cmd) return cmd_family(lag_args);
    if (*jac_cmd) return cmd_family(jac_args);
    if (*sweep_cmd) return cmd_sweep(sweep_args);
    if (*check_cmd) return cmd_check(check_args);
  } catch (const qdiff::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const qdiff::DegenerateParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const qdiff::DegenerateSample& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const qdiff::DegenerateC& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const qdiff::ConditionABViolated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const qdiff::ZeroPoleCollision& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const qdiff::OddDegree& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const qdiff::Error& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitBadInput;
}
