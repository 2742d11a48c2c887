// Command-line front end: kernel tabulation, transform jobs, function
// expansion, and the verification suite.  All outputs are pure functions of
// the parsed job: fixed ordering, 17-significant-digit decimals, no
// timestamps.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or regime error,
// 3 numeric non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mfk/oracle.hpp"

namespace {

using cplx = std::complex<double>;
using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------- parsing

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw std::invalid_argument(what + ": cannot parse number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw std::invalid_argument(what + ": cannot parse integer '" + s + "'");
  return v;
}

// "re" or "re,im"
cplx parse_complex(const std::string& s, const std::string& what) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {parse_double(s, what), 0.0};
  return {parse_double(s.substr(0, comma), what), parse_double(s.substr(comma + 1), what)};
}

struct NRange {
  int lo = 1;
  int hi = 1;
};

// "a..b" or a single "a"
NRange parse_range(const std::string& s, const std::string& what) {
  const auto dots = s.find("..");
  NRange r;
  if (dots == std::string::npos) {
    r.lo = r.hi = parse_int(s, what);
  } else {
    r.lo = parse_int(s.substr(0, dots), what);
    r.hi = parse_int(s.substr(dots + 2), what);
  }
  if (r.lo < 1 || r.hi < r.lo)
    throw std::invalid_argument(what + ": range must satisfy 1 <= lo <= hi");
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

// Grid syntax: comma list "1.2,2,5" or range "min:max:count[log|lin]".
// For x grids the default (and "log") spacing is logarithmic in x - 1, since
// the kernels vary fastest near x = 1; y grids default to linear.
std::vector<double> parse_grid(const std::string& s, bool x_axis, const std::string& what) {
  if (s.empty()) throw std::invalid_argument(what + ": empty grid");
  const auto parts = split(s, ':');
  if (parts.size() == 1) {
    std::vector<double> g;
    for (const std::string& tok : split(s, ',')) g.push_back(parse_double(tok, what));
    return g;
  }
  if (parts.size() != 3)
    throw std::invalid_argument(what + ": grid must be a comma list or min:max:count[log|lin]");
  const double lo = parse_double(parts[0], what);
  const double hi = parse_double(parts[1], what);
  std::string ct = parts[2];
  bool log_spaced = x_axis;  // default per axis
  if (ct.size() >= 3 && ct.substr(ct.size() - 3) == "log") {
    log_spaced = true;
    ct.resize(ct.size() - 3);
  } else if (ct.size() >= 3 && ct.substr(ct.size() - 3) == "lin") {
    log_spaced = false;
    ct.resize(ct.size() - 3);
  }
  const int count = parse_int(ct, what);
  if (count < 1) throw std::invalid_argument(what + ": grid count must be >= 1");
  if (count == 1) return {lo};
  if (!(hi > lo)) throw std::invalid_argument(what + ": grid max must exceed min");

  std::vector<double> g(count);
  if (log_spaced) {
    const double shift = x_axis ? 1.0 : 0.0;  // x grids are log spaced in x - 1
    if (!(lo > shift))
      throw std::invalid_argument(what + ": log-spaced grid requires min > " +
                                  (x_axis ? std::string("1") : std::string("0")));
    const double la = std::log(lo - shift);
    const double lb = std::log(hi - shift);
    for (int i = 0; i < count; ++i)
      g[i] = shift + std::exp(la + (lb - la) * i / (count - 1));
  } else {
    for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
  }
  return g;
}

// ------------------------------------------------------------------- files

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

// One coefficient per line: "re" or "re,im"; blank and '#' lines skipped.
mfk::CoefficientSequence load_coefficients(const std::string& path) {
  mfk::CoefficientSequence a;
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    if (tok[0] == '#') continue;
    try {
      a.values.push_back(parse_complex(tok, "coefficient"));
    } catch (const std::invalid_argument&) {
      throw std::runtime_error(path + ": parse error at line " + std::to_string(lineno) +
                               ": '" + tok + "'");
    }
  }
  return a;
}

cplx json_complex(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw std::invalid_argument(what + ": complex values must be [re, im] pairs");
  return {v[0].get<double>(), v[1].get<double>()};
}

// Trigonometric boundary-data file:
// {"mu": [re,im], "constant": [re,im], "sine": [[re,im],...], "cosine": [...]}
mfk::FunctionSpec load_spec(const std::string& path) {
  const json s = json::parse(read_file(path));
  if (!s.is_object()) throw std::invalid_argument(path + ": spec file must be a JSON object");
  mfk::FunctionSpec spec;
  spec.mu = mfk::MuParameter::broad(json_complex(s.at("mu"), "spec mu"));
  if (s.contains("constant")) spec.constant = json_complex(s["constant"], "spec constant");
  for (const char* key : {"sine", "cosine"}) {
    if (!s.contains(key)) continue;
    if (!s[key].is_array())
      throw std::invalid_argument(std::string("spec ") + key + ": must be an array");
    auto& dst = (key[0] == 's') ? spec.sine_coeffs : spec.cosine_coeffs;
    for (const json& v : s[key]) dst.push_back(json_complex(v, std::string("spec ") + key));
  }
  return spec;
}

// ------------------------------------------------------------------ output

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_table(const char* abscissa, const std::vector<double>& grid,
                      const std::vector<cplx>& values) {
  std::string out = std::string(abscissa) + ",re,im\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    out += fmt17(grid[i]) + "," + fmt17(values[i].real()) + "," + fmt17(values[i].imag()) + "\n";
  return out;
}

// ------------------------------------------------------- manifest plumbing

// Every option value is held as a string and parsed after the manifest merge,
// so a manifest file and a command-line flag travel the same path.  Flags
// given on the command line always win over manifest entries.
struct OptionTable {
  CLI::App* sub = nullptr;
  std::map<std::string, std::pair<CLI::Option*, std::string*>> strings;
  std::map<std::string, std::pair<CLI::Option*, bool*>> switches;

  void add(const std::string& flag, std::string& var, const std::string& desc) {
    strings[flag.substr(2)] = {sub->add_option(flag, var, desc), &var};
  }
  void add_switch(const std::string& flag, bool& var, const std::string& desc) {
    switches[flag.substr(2)] = {sub->add_flag(flag, var, desc), &var};
  }

  void apply_manifest(const std::string& path) {
    const json m = json::parse(read_file(path));
    if (!m.is_object()) throw std::invalid_argument(path + ": manifest must be a JSON object");
    for (const auto& [key, value] : m.items()) {
      if (key == "command") {
        if (value != sub->get_name())
          throw std::invalid_argument(path + ": manifest command '" +
                                      value.get<std::string>() + "' does not match '" +
                                      sub->get_name() + "'");
        continue;
      }
      if (auto it = strings.find(key); it != strings.end()) {
        if (it->second.first->count() == 0)
          *it->second.second = value.is_string() ? value.get<std::string>() : value.dump();
        continue;
      }
      if (auto it = switches.find(key); it != switches.end()) {
        if (it->second.first->count() == 0) *it->second.second = value.get<bool>();
        continue;
      }
      throw std::invalid_argument(path + ": unknown manifest key '" + key + "' for command " +
                                  sub->get_name());
    }
  }
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Runs body over [0, count) in parallel with per-slot exception capture; the
// lowest failing index is rethrown, independent of completion order.
template <class Fn>
void parallel_slots(std::size_t count, const Fn& body) {
  std::vector<std::exception_ptr> errs(count);
  mfk::parallel_for(count, [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      errs[i] = std::current_exception();
    }
  });
  for (const std::exception_ptr& e : errs)
    if (e) std::rethrow_exception(e);
}

mfk::KernelRoute parse_route(const std::string& s) {
  if (s.empty() || s == "automatic") return mfk::KernelRoute::automatic;
  if (s == "mehler") return mfk::KernelRoute::mehler;
  if (s == "legendre") return mfk::KernelRoute::legendre;
  if (s == "mellin_barnes") return mfk::KernelRoute::mellin_barnes;
  throw std::invalid_argument("unknown route '" + s +
                              "' (automatic|mehler|legendre|mellin_barnes)");
}

// Shared numeric knobs.  --abs-tol / --rel-tol apply to both the outer and the
// kernel quadrature, which keeps an unattainable request unattainable all the
// way down (exit code 3) instead of being masked by a looser stage.
struct CommonOpts {
  std::string route, abs_tol, rel_tol, x_max;

  void attach(OptionTable& t) {
    t.add("--route", route, "kernel route: automatic|mehler|legendre|mellin_barnes");
    t.add("--abs-tol", abs_tol, "absolute tolerance for all quadrature stages");
    t.add("--rel-tol", rel_tol, "relative tolerance for all quadrature stages");
    t.add("--x-max", x_max, "hard truncation for (1,inf) integrals (0 = adaptive)");
  }

  mfk::TransformConfig tc() const {
    mfk::TransformConfig tc;
    tc.route = parse_route(route);
    if (!abs_tol.empty()) {
      const double v = parse_double(abs_tol, "--abs-tol");
      tc.quad.abs_tol = v;
      tc.kernel_quad.abs_tol = v;
    }
    if (!rel_tol.empty()) {
      const double v = parse_double(rel_tol, "--rel-tol");
      tc.quad.rel_tol = v;
      tc.kernel_quad.rel_tol = v;
    }
    if (!x_max.empty()) tc.x_max = parse_double(x_max, "--x-max");
    tc.validate();
    return tc;
  }
};

// ---------------------------------------------------------------- commands

struct KernelCmd {
  OptionTable opts;
  CommonOpts common;
  std::string manifest, kind, mu, n, tau, omega, x, y, output;

  void attach(CLI::App& app) {
    opts.sub = app.add_subcommand("kernel", "tabulate a kernel on a grid (CSV)");
    opts.add("--manifest", manifest, "JSON job file; explicit flags override it");
    opts.add("--kind", kind, "conical|incomplete_legendre|bessel|incomplete_bessel");
    opts.add("--mu", mu, "order parameter, re[,im]");
    opts.add("--n", n, "discrete degree (integer >= 1)");
    opts.add("--tau", tau, "continuous degree (conical/bessel kinds only)");
    opts.add("--omega", omega, "upper limit of the incomplete integrals");
    opts.add("--x", x, "argument grid over (1,inf): list or min:max:count[log|lin]");
    opts.add("--y", y, "argument grid over [0,inf): list or min:max:count[log|lin]");
    opts.add("--output", output, "CSV path (default: stdout)");
    common.attach(opts);
  }

  int run() {
    if (!manifest.empty()) opts.apply_manifest(manifest);
    require(!kind.empty(), "kernel: --kind is required");
    const mfk::TransformConfig tc = common.tc();
    const mfk::QuadratureConfig& q = tc.kernel_quad;

    const bool on_x = (kind == "conical" || kind == "incomplete_legendre");
    const bool on_y = (kind == "bessel" || kind == "incomplete_bessel");
    require(on_x || on_y, "kernel: unknown kind '" + kind + "'");
    require(on_x ? !x.empty() : !y.empty(),
            "kernel: kind " + kind + " needs " + (on_x ? "--x" : "--y"));
    const std::vector<double> grid =
        parse_grid(on_x ? x : y, on_x, on_x ? "--x" : "--y");

    std::function<cplx(double)> eval;
    if (kind == "conical") {
      require(!mu.empty(), "kernel: conical needs --mu");
      require(!n.empty() || !tau.empty(), "kernel: conical needs --n or --tau");
      const mfk::MuParameter m = mfk::MuParameter::broad(parse_complex(mu, "--mu"));
      const double tv = !tau.empty() ? parse_double(tau, "--tau")
                                     : mfk::KernelDegree::discrete(parse_int(n, "--n")).tau;
      eval = [=, &q](double xx) { return mfk::conical_kernel(m, tv, xx, tc.route, q); };
    } else if (kind == "incomplete_legendre") {
      require(!mu.empty() && !n.empty() && !omega.empty(),
              "kernel: incomplete_legendre needs --mu, --n and --omega");
      require(tau.empty(), "kernel: incomplete kinds take --n, not --tau");
      const mfk::MuParameter m = mfk::MuParameter::broad(parse_complex(mu, "--mu"));
      const int nv = parse_int(n, "--n");
      const double om = parse_double(omega, "--omega");
      eval = [=, &q](double xx) { return mfk::incomplete_legendre(m, nv, xx, om, q); };
    } else if (kind == "bessel") {
      require(!n.empty() || !tau.empty(), "kernel: bessel needs --n or --tau");
      const double tv = !tau.empty() ? parse_double(tau, "--tau")
                                     : mfk::KernelDegree::discrete(parse_int(n, "--n")).tau;
      eval = [=, &q](double yy) { return cplx(mfk::bessel_k_imag(tv, yy, q), 0.0); };
    } else {
      require(!n.empty() && !omega.empty(), "kernel: incomplete_bessel needs --n and --omega");
      require(tau.empty(), "kernel: incomplete kinds take --n, not --tau");
      const int nv = parse_int(n, "--n");
      const double om = parse_double(omega, "--omega");
      eval = [=, &q](double yy) { return cplx(mfk::incomplete_bessel(nv, yy, om, q), 0.0); };
    }

    std::vector<cplx> values(grid.size());
    parallel_slots(grid.size(), [&](std::size_t i) { values[i] = eval(grid[i]); });

    write_output(output, csv_table(on_x ? "x" : "y", grid, values));
    return 0;
  }
};

struct ForwardCmd {
  OptionTable opts;
  CommonOpts common;
  std::string manifest, coefficients, mu, x, tail_mass, output, tail_output;

  void attach(CLI::App& app) {
    opts.sub = app.add_subcommand("forward", "synthesize F from coefficients (CSV + tail JSON)");
    opts.add("--manifest", manifest, "JSON job file; explicit flags override it");
    opts.add("--coefficients", coefficients, "coefficient file, one re[,im] per line");
    opts.add("--mu", mu, "order parameter, re[,im]");
    opts.add("--x", x, "evaluation grid over (1,inf)");
    opts.add("--tail-mass", tail_mass, "declared l1 mass beyond the stored coefficients");
    opts.add("--output", output, "CSV path (default: stdout)");
    opts.add("--tail-output", tail_output,
             "tail-bound JSON path (default: <output>.tail.json when --output is set)");
    common.attach(opts);
  }

  int run() {
    if (!manifest.empty()) opts.apply_manifest(manifest);
    require(!coefficients.empty(), "forward: --coefficients is required");
    require(!mu.empty(), "forward: --mu is required");
    require(!x.empty(), "forward: --x is required");
    const mfk::TransformConfig tc = common.tc();
    const mfk::MuParameter m = mfk::MuParameter::broad(parse_complex(mu, "--mu"));
    mfk::CoefficientSequence a = load_coefficients(coefficients);
    if (!tail_mass.empty()) a.tail_l1 = parse_double(tail_mass, "--tail-mass");
    a.validate();
    const std::vector<double> grid = parse_grid(x, true, "--x");

    std::vector<mfk::SeriesResult> res(grid.size());
    parallel_slots(grid.size(),
                   [&](std::size_t i) { res[i] = mfk::forward_series(a, m, grid[i], tc); });

    std::vector<cplx> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = res[i].value;
    write_output(output, csv_table("x", grid, values));

    std::string tail_path = tail_output;
    if (tail_path.empty() && !output.empty()) tail_path = output + ".tail.json";
    if (!tail_path.empty() || output.empty()) {
      ordered_json t;
      t["tail_l1"] = a.tail_l1;
      t["points"] = ordered_json::array();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        ordered_json p;
        p["x"] = grid[i];
        p["tail_bound"] = res[i].tail_bound;
        t["points"].push_back(p);
      }
      write_output(tail_path, t.dump(2) + "\n");
    }
    return 0;
  }
};

struct InvertCmd {
  OptionTable opts;
  CommonOpts common;
  std::string manifest, coefficients, spec, mu, n, f_tail_power, output;

  void attach(CLI::App& app) {
    opts.sub = app.add_subcommand(
        "invert", "recover coefficients (self-test from a coefficient file, or from a "
                  "trigonometric function spec)");
    opts.add("--manifest", manifest, "JSON job file; explicit flags override it");
    opts.add("--coefficients", coefficients, "self-test: synthesize from these, then invert");
    opts.add("--spec", spec, "function-spec JSON file (carries its own mu)");
    opts.add("--mu", mu, "order parameter for self-test mode, re[,im]");
    opts.add("--n", n, "coefficient indices, 'a..b' or a single integer (default 1..8)");
    opts.add("--f-tail-power", f_tail_power,
             "declared algebraic decay power of F (default 0.25; must not overstate)");
    opts.add("--output", output, "JSON path (default: stdout)");
    common.attach(opts);
  }

  int run() {
    if (!manifest.empty()) opts.apply_manifest(manifest);
    require(coefficients.empty() != spec.empty(),
            "invert: exactly one of --coefficients or --spec is required");
    const mfk::TransformConfig tc = common.tc();
    const NRange range = parse_range(n.empty() ? "1..8" : n, "--n");
    const std::size_t count = static_cast<std::size_t>(range.hi - range.lo + 1);

    ordered_json out = ordered_json::array();
    if (!coefficients.empty()) {
      require(!mu.empty(), "invert: self-test mode needs --mu");
      const mfk::MuParameter m = mfk::MuParameter::broad(parse_complex(mu, "--mu"));
      mfk::CoefficientSequence a = load_coefficients(coefficients);
      a.validate();
      const double power =
          f_tail_power.empty() ? 0.25 : parse_double(f_tail_power, "--f-tail-power");
      auto F = [&](double xx) { return mfk::forward_series(a, m, xx, tc).value; };

      std::vector<mfk::CoefficientResult> res(count);
      parallel_slots(count, [&](std::size_t i) {
        res[i] = mfk::inverse_coefficients(F, power, m, range.lo + static_cast<int>(i), tc);
      });

      for (std::size_t i = 0; i < count; ++i) {
        if (!res[i].converged)
          throw mfk::convergence_error("invert: coefficient n = " +
                                       std::to_string(range.lo + static_cast<int>(i)) +
                                       " did not converge");
        ordered_json e;
        e["n"] = range.lo + static_cast<int>(i);
        e["re"] = res[i].value.real();
        e["im"] = res[i].value.imag();
        e["error_estimate"] = res[i].error_estimate;
        out.push_back(e);
      }
    } else {
      require(mu.empty(), "invert: --mu conflicts with --spec (the spec file carries mu)");
      const mfk::FunctionSpec fs = load_spec(spec);

      std::vector<mfk::IntegralResult> res(count);
      parallel_slots(count, [&](std::size_t i) {
        res[i] = mfk::project_spec_function(fs, range.lo + static_cast<int>(i), tc);
      });

      for (std::size_t i = 0; i < count; ++i) {
        if (!res[i].converged)
          throw mfk::convergence_error("invert: projection n = " +
                                       std::to_string(range.lo + static_cast<int>(i)) +
                                       " did not converge");
        ordered_json e;
        e["n"] = range.lo + static_cast<int>(i);
        e["re"] = res[i].value.real();
        e["im"] = res[i].value.imag();
        e["error_estimate"] = res[i].error_estimate;
        out.push_back(e);
      }
    }
    write_output(output, out.dump(2) + "\n");
    return 0;
  }
};

struct ExpandCmd {
  OptionTable opts;
  CommonOpts common;
  std::string manifest, coefficients, mu, n_count, output;

  void attach(CLI::App& app) {
    opts.sub = app.add_subcommand(
        "expand", "project a synthesized series onto the incomplete kernels (JSON)");
    opts.add("--manifest", manifest, "JSON job file; explicit flags override it");
    opts.add("--coefficients", coefficients, "coefficient file, one re[,im] per line");
    opts.add("--mu", mu, "order parameter, re[,im]");
    opts.add("--n-count", n_count, "number of projections (default: the stored support)");
    opts.add("--output", output, "JSON path (default: stdout)");
    common.attach(opts);
  }

  int run() {
    if (!manifest.empty()) opts.apply_manifest(manifest);
    require(!coefficients.empty(), "expand: --coefficients is required");
    require(!mu.empty(), "expand: --mu is required");
    const mfk::TransformConfig tc = common.tc();
    const mfk::MuParameter m = mfk::MuParameter::strict(parse_complex(mu, "--mu"));
    mfk::CoefficientSequence a = load_coefficients(coefficients);
    a.validate();
    const int nc = n_count.empty() ? 0 : parse_int(n_count, "--n-count");

    const mfk::CompleteExpansion ce = mfk::expand_complete_coefficients(a, m, tc, nc);
    if (!ce.converged) throw mfk::convergence_error("expand: projection did not converge");

    ordered_json out = ordered_json::array();
    for (std::size_t i = 0; i < ce.d.size(); ++i) {
      ordered_json e;
      e["n"] = static_cast<int>(i) + 1;
      e["re"] = ce.d[i].real();
      e["im"] = ce.d[i].imag();
      e["error_estimate"] = ce.d_error[i];
      e["closed_re"] = ce.d_closed_form[i].real();
      e["closed_im"] = ce.d_closed_form[i].imag();
      out.push_back(e);
    }
    write_output(output, out.dump(2) + "\n");
    return 0;
  }
};

struct VerifyCmd {
  OptionTable opts;
  std::string manifest, select, threshold, output;
  bool serial = false;

  void attach(CLI::App& app) {
    opts.sub = app.add_subcommand("verify", "run the identity verification suite (JSON report)");
    opts.add("--manifest", manifest, "JSON job file; explicit flags override it");
    opts.add("--select", select,
             "comma list of identities (default: all); names as in the report");
    opts.add("--threshold", threshold, "uniform judgment threshold overriding the defaults");
    opts.add("--output", output, "JSON report path (default: stdout)");
    opts.add_switch("--serial", serial, "disable parallel execution");
  }

  int run() {
    if (!manifest.empty()) opts.apply_manifest(manifest);
    mfk::SuiteConfig cfg;
    if (select.empty()) {
      cfg.selection = mfk::all_identities();
    } else {
      for (const std::string& name : split(select, ','))
        cfg.selection.push_back(mfk::identity_from_name(name));
    }
    if (!threshold.empty())
      cfg.thresholds =
          mfk::OracleThresholds::uniform(parse_double(threshold, "--threshold"));
    if (serial) cfg.exec = mfk::Exec::serial;

    const std::vector<mfk::IdentityReport> reports = mfk::run_suite(cfg);

    int passed = 0;
    ordered_json doc;
    doc["suite_version"] = mfk::kSuiteVersion;
    doc["identities"] = ordered_json::array();
    for (const mfk::IdentityReport& r : reports) {
      ordered_json e;
      e["id"] = mfk::identity_name(r.id);
      e["params"] = ordered_json::object();
      for (const auto& kv : r.params) e["params"][kv.first] = kv.second;
      e["lhs"]["re"] = r.lhs.real();
      e["lhs"]["im"] = r.lhs.imag();
      e["rhs"]["re"] = r.rhs.real();
      e["rhs"]["im"] = r.rhs.imag();
      e["abs_err"] = r.abs_err;  // non-finite serializes as null
      e["rel_err"] = r.rel_err;
      e["passed"] = r.passed;
      doc["identities"].push_back(e);
      if (r.passed) ++passed;
    }
    doc["summary"]["total"] = static_cast<int>(reports.size());
    doc["summary"]["passed"] = passed;

    write_output(output, doc.dump(2) + "\n");
    return passed == static_cast<int>(reports.size()) ? 0 : 1;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete Mehler-Fock transform toolkit"};
  app.require_subcommand(1);

  KernelCmd kernel;
  ForwardCmd forward;
  InvertCmd invert;
  ExpandCmd expand;
  VerifyCmd verify;
  kernel.attach(app);
  forward.attach(app);
  invert.attach(app);
  expand.attach(app);
  verify.attach(app);

  try {
    app.parse(argc, argv);
    if (kernel.opts.sub->parsed()) return kernel.run();
    if (forward.opts.sub->parsed()) return forward.run();
    if (invert.opts.sub->parsed()) return invert.run();
    if (expand.opts.sub->parsed()) return expand.run();
    if (verify.opts.sub->parsed()) return verify.run();
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const mfk::convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
