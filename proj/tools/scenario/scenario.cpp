#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <limits>

#include "biham/canonical.hpp"
#include "biham/continuum.hpp"
#include "biham/dynamics.hpp"
#include "biham/errors.hpp"
#include "biham/lorentzian.hpp"
#include "biham/spectral.hpp"
#include "io.hpp"
#include "log.hpp"

namespace biham::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Schema checking

enum class Bound { Any, Positive, NonNegative };

class Schema {
 public:
  Schema(const json& obj, std::string path, std::vector<Diagnostic>& out)
      : obj_(obj), path_(std::move(path)), out_(out) {
    if (!obj_.is_object()) fail("", "expected an object");
  }

  [[nodiscard]] bool ok() const { return obj_.is_object(); }

  void allow(std::initializer_list<std::string_view> keys) {
    if (!ok()) return;
    for (const auto& [key, _] : obj_.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail(key, "unknown field");
    }
  }

  bool has(const std::string& key) const { return ok() && obj_.contains(key); }

  std::optional<double> number(const std::string& key, bool required, Bound bound = Bound::Any) {
    if (!has(key)) {
      if (required) fail(key, "required number is missing");
      return std::nullopt;
    }
    const json& v = obj_.at(key);
    if (!v.is_number()) {
      fail(key, "must be a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      fail(key, "must be finite");
      return std::nullopt;
    }
    if (bound == Bound::Positive && !(x > 0.0)) {
      fail(key, "must be positive");
      return std::nullopt;
    }
    if (bound == Bound::NonNegative && x < 0.0) {
      fail(key, "must be non-negative");
      return std::nullopt;
    }
    return x;
  }

  std::optional<long> integer(const std::string& key, bool required, long min) {
    if (!has(key)) {
      if (required) fail(key, "required integer is missing");
      return std::nullopt;
    }
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) {
      fail(key, "must be an integer");
      return std::nullopt;
    }
    const long x = v.get<long>();
    if (x < min) {
      fail(key, "must be >= " + std::to_string(min));
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::string> string(const std::string& key, bool required,
                                    std::initializer_list<std::string_view> choices = {}) {
    if (!has(key)) {
      if (required) fail(key, "required string is missing");
      return std::nullopt;
    }
    const json& v = obj_.at(key);
    if (!v.is_string()) {
      fail(key, "must be a string");
      return std::nullopt;
    }
    const auto s = v.get<std::string>();
    if (choices.size() && std::find(choices.begin(), choices.end(), s) == choices.end()) {
      std::string msg = "must be one of";
      for (auto c : choices) msg += " \"" + std::string(c) + "\"";
      fail(key, msg);
      return std::nullopt;
    }
    return s;
  }

  const json* object(const std::string& key, bool required) {
    if (!has(key)) {
      if (required) fail(key, "required object is missing");
      return nullptr;
    }
    if (!obj_.at(key).is_object()) {
      fail(key, "must be an object");
      return nullptr;
    }
    return &obj_.at(key);
  }

  /// Array of finite numbers; `length` < 0 accepts any non-empty length.
  std::optional<std::vector<double>> numbers(const std::string& key, bool required,
                                             long length = -1, Bound bound = Bound::Any) {
    if (!has(key)) {
      if (required) fail(key, "required array is missing");
      return std::nullopt;
    }
    return number_array(obj_.at(key), key, length, bound);
  }

  std::optional<std::vector<double>> number_array(const json& v, const std::string& key,
                                                  long length, Bound bound) {
    if (!v.is_array() || v.empty()) {
      fail(key, "must be a non-empty array of numbers");
      return std::nullopt;
    }
    if (length >= 0 && static_cast<long>(v.size()) != length) {
      fail(key, "must have " + std::to_string(length) + " entries, got " +
                    std::to_string(v.size()));
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        fail(key, "entries must be finite numbers");
        return std::nullopt;
      }
      const double x = e.get<double>();
      if (bound == Bound::NonNegative && x < 0.0) {
        fail(key, "entries must be non-negative");
        return std::nullopt;
      }
      if (bound == Bound::Positive && !(x > 0.0)) {
        fail(key, "entries must be positive");
        return std::nullopt;
      }
      out.push_back(x);
    }
    return out;
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void fail(const std::string& key, const std::string& message, const char* kind = "schema") {
    out_.push_back({kind, key.empty() ? path_ : child(key), message});
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<Diagnostic>& out_;
};

void physics(std::vector<Diagnostic>& out, const std::string& path, const std::string& message) {
  out.push_back({"physics", path, message});
}

// {"re": [...], "im": [...]} of a given length (or any when length < 0).
std::optional<CVector> check_complex_vector(const json& j, const std::string& path, long length,
                                            std::vector<Diagnostic>& out, bool tagged = false) {
  Schema s(j, path, out);
  if (!s.ok()) return std::nullopt;
  if (tagged) {
    s.allow({"kind", "re", "im"});
  } else {
    s.allow({"re", "im"});
  }
  auto re = s.numbers("re", true, length);
  auto im = s.numbers("im", true, length);
  if (!re || !im) return std::nullopt;
  if (re->size() != im->size()) {
    s.fail("im", "must have the same length as re");
    return std::nullopt;
  }
  CVector v(static_cast<Eigen::Index>(re->size()));
  for (std::size_t k = 0; k < re->size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = Complex((*re)[k], (*im)[k]);
  }
  return v;
}

std::optional<NhMatrix> check_matrix_object(const json& j, const std::string& path,
                                            std::vector<Diagnostic>& out) {
  Schema s(j, path, out);
  if (!s.ok()) return std::nullopt;
  s.allow({"n", "re", "im"});
  const auto n = s.integer("n", true, 1);
  if (!n) return std::nullopt;
  const std::size_t before = out.size();
  for (const char* part : {"re", "im"}) {
    if (!j.contains(part)) {
      s.fail(part, "required matrix part is missing");
      continue;
    }
    const json& rows = j.at(part);
    if (!rows.is_array() || static_cast<long>(rows.size()) != *n) {
      s.fail(part, "must be an array of " + std::to_string(*n) + " rows");
      continue;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      s.number_array(rows[r], std::string(part) + "[" + std::to_string(r) + "]", *n, Bound::Any);
    }
  }
  if (out.size() != before) return std::nullopt;
  return matrix_from_json(j);
}

std::filesystem::path resolve(const ScenarioConfig& config, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() ? p : config.base_dir / p;
}

// "matrix" (inline object) or "matrix_file" (path to a JSON matrix).
std::optional<NhMatrix> check_matrix_source(Schema& s, const ScenarioConfig& config,
                                            std::vector<Diagnostic>& out) {
  const bool inline_matrix = s.has("matrix");
  const bool file_matrix = s.has("matrix_file");
  if (inline_matrix == file_matrix) {
    s.fail("matrix", "exactly one of \"matrix\" or \"matrix_file\" is required");
    return std::nullopt;
  }
  if (inline_matrix) {
    const json* m = s.object("matrix", true);
    return m ? check_matrix_object(*m, s.child("matrix"), out) : std::nullopt;
  }
  const auto file = s.string("matrix_file", true);
  if (!file) return std::nullopt;
  const auto path = resolve(config, *file);
  json parsed;
  try {
    parsed = json::parse(read_file(path), nullptr, true, false);
  } catch (const IoError& e) {
    s.fail("matrix_file", e.what(), "io");
    return std::nullopt;
  } catch (const json::parse_error& e) {
    s.fail("matrix_file", std::string("malformed JSON: ") + e.what());
    return std::nullopt;
  }
  return check_matrix_object(parsed, s.child("matrix_file"), out);
}

std::optional<double> check_hbar(Schema& s) {
  if (!s.has("hbar")) return 1.0;
  return s.number("hbar", false, Bound::Positive);
}

// Number of steps if t_final is (close to) an integer multiple of dt.
std::optional<long> step_count(double t_final, double dt) {
  const double ratio = t_final / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio)) return std::nullopt;
  return static_cast<long>(rounded);
}

CVector random_state(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  CVector psi(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    psi(k) = Complex(re, im);
  }
  return psi.normalized();
}

// ---------------------------------------------------------------------------
// Per-command validation. Each returns the parsed inputs it needed so that
// run() does not re-derive them.

struct DecomposeInputs {
  std::optional<NhMatrix> h;
  double tol = kDefaultDecomposeTol;
};

DecomposeInputs check_decompose(const ScenarioConfig& c, std::vector<Diagnostic>& out) {
  DecomposeInputs in;
  Schema s(c.params, "", out);
  if (!s.ok()) return in;
  s.allow({"command", "seed", "output", "matrix", "matrix_file", "tol"});
  s.string("output", false);
  in.h = check_matrix_source(s, c, out);
  if (auto tol = s.number("tol", false, Bound::Positive)) in.tol = *tol;
  return in;
}

struct StateInputs {
  std::optional<CVector> psi;
  std::optional<CVector> phibar;
  std::optional<RVector> csq;
};

StateInputs check_state(Schema& s, const std::string& psi_key, const std::string& phibar_key,
                        Eigen::Index n, std::vector<Diagnostic>& out) {
  StateInputs in;
  const long len = n > 0 ? static_cast<long>(n) : -1;
  if (const json* p = s.object(psi_key, false)) in.psi = check_complex_vector(*p, s.child(psi_key), len, out);
  if (!phibar_key.empty()) {
    if (const json* p = s.object(phibar_key, false)) {
      in.phibar = check_complex_vector(*p, s.child(phibar_key), len, out);
    }
  }
  if (auto csq = s.numbers("csq", false, len, Bound::NonNegative)) {
    in.csq = Eigen::Map<const RVector>(csq->data(), static_cast<Eigen::Index>(csq->size()));
  }
  if (in.phibar && in.csq) s.fail("csq", "csq and an explicit conjugate field are exclusive");
  return in;
}

struct EvolveInputs {
  std::optional<NhMatrix> h;
  StateInputs state;
  double hbar = 1.0;
  std::string method = "rk4";
  double dt = 0.0;
  double t_final = 0.0;
  long steps = 0;
  long record_every = 1;
};

EvolveInputs check_evolve(const ScenarioConfig& c, std::vector<Diagnostic>& out) {
  EvolveInputs in;
  Schema s(c.params, "", out);
  if (!s.ok()) return in;
  s.allow({"command", "seed", "output", "matrix", "matrix_file", "hbar", "psi0", "phibar0", "csq",
           "method", "dt", "t_final", "record_every"});
  s.string("output", false);
  in.h = check_matrix_source(s, c, out);
  const auto hbar = check_hbar(s);
  if (hbar) in.hbar = *hbar;
  in.state = check_state(s, "psi0", "phibar0", in.h ? in.h->size() : -1, out);
  if (auto m = s.string("method", false, {"rk4", "exact"})) in.method = *m;
  const auto dt = s.number("dt", true, Bound::Positive);
  const auto t_final = s.number("t_final", true, Bound::NonNegative);
  if (auto every = s.integer("record_every", false, 1)) in.record_every = *every;
  if (dt && t_final) {
    in.dt = *dt;
    in.t_final = *t_final;
    if (auto steps = step_count(*t_final, *dt)) {
      in.steps = *steps;
    } else {
      physics(out, "t_final", "t_final must be an integer multiple of dt");
    }
    if (in.h && hbar && in.method == "rk4") {
      const double step_norm = *dt * in.h->operator_norm() / *hbar;
      if (step_norm > kMaxStepNorm) {
        physics(out, "dt", "dt*||h||/hbar = " + format_number(step_norm) + " exceeds 0.5");
      }
    }
  }
  return in;
}

struct VerifyInputs {
  std::optional<NhMatrix> h;
  StateInputs state;
  double hbar = 1.0;
  double fd_step = 1e-6;
  double tol = kDefaultDecomposeTol;
};

VerifyInputs check_verify(const ScenarioConfig& c, std::vector<Diagnostic>& out) {
  VerifyInputs in;
  Schema s(c.params, "", out);
  if (!s.ok()) return in;
  s.allow({"command", "seed", "output", "matrix", "matrix_file", "hbar", "psi", "csq", "fd_step",
           "tol"});
  s.string("output", false);
  in.h = check_matrix_source(s, c, out);
  if (auto hbar = check_hbar(s)) in.hbar = *hbar;
  in.state = check_state(s, "psi", "", in.h ? in.h->size() : -1, out);
  if (auto fd = s.number("fd_step", false, Bound::Positive)) in.fd_step = *fd;
  if (auto tol = s.number("tol", false, Bound::Positive)) in.tol = *tol;
  return in;
}

struct SweepInputs {
  LorentzianParams start;
  LorentzianParams end;
  double duration = 0.0;
  double dt = 0.0;
  long samples = 500;
  double hbar = 1.0;
  RVector csq = RVector::Zero(2);
};

// Minimum of z(s)^2 - x(s)^2 - y(s)^2 over s in [0, 1] for a linear path.
double min_discriminant(const LorentzianParams& a, const LorentzianParams& b) {
  const double dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
  const double qa = dz * dz - dx * dx - dy * dy;
  const double qb = 2.0 * (a.z * dz - a.x * dx - a.y * dy);
  const double qc = a.discriminant();
  double best = std::min(qc, b.discriminant());
  if (qa > 0.0) {
    const double s = -qb / (2.0 * qa);
    if (s > 0.0 && s < 1.0) best = std::min(best, qc + s * (qb + s * qa));
  }
  return best;
}

SweepInputs check_sweep(const ScenarioConfig& c, std::vector<Diagnostic>& out) {
  SweepInputs in;
  Schema s(c.params, "", out);
  if (!s.ok()) return in;
  s.allow({"command", "seed", "output", "path", "T", "dt", "csq", "samples", "hbar"});
  s.string("output", false);

  bool path_ok = false;
  if (const json* p = s.object("path", true)) {
    Schema ps(*p, "path", out);
    ps.allow({"x0", "y0", "z0", "x1", "y1", "z1", "interpolation"});
    ps.string("interpolation", false, {"linear"});
    const auto x0 = ps.number("x0", true), y0 = ps.number("y0", true), z0 = ps.number("z0", true);
    const auto x1 = ps.number("x1", true), y1 = ps.number("y1", true), z1 = ps.number("z1", true);
    if (x0 && y0 && z0 && x1 && y1 && z1) {
      in.start = {*x0, *y0, *z0};
      in.end = {*x1, *y1, *z1};
      path_ok = true;
      if (!(in.start.discriminant() > 0.0)) {
        physics(out, "path", "start point (" + format_number(*x0) + ", " + format_number(*y0) +
                                 ", " + format_number(*z0) + ") is outside the real regime");
      }
      if (!(in.end.discriminant() > 0.0)) {
        physics(out, "path", "end point (" + format_number(*x1) + ", " + format_number(*y1) +
                                 ", " + format_number(*z1) + ") is outside the real regime");
      }
      if (in.start.discriminant() > 0.0 && in.end.discriminant() > 0.0 &&
          !(min_discriminant(in.start, in.end) > 0.0)) {
        physics(out, "path", "path leaves the real regime z^2 > x^2 + y^2 between its endpoints");
      }
    }
  }
  const auto T = s.number("T", true, Bound::Positive);
  const auto dt = s.number("dt", true, Bound::Positive);
  if (auto hbar = check_hbar(s)) in.hbar = *hbar;
  if (auto samples = s.integer("samples", false, 1)) in.samples = *samples;
  if (auto csq = s.numbers("csq", true, 2, Bound::NonNegative)) in.csq << (*csq)[0], (*csq)[1];
  if (T) in.duration = *T;
  if (dt) in.dt = *dt;
  if (path_ok && T && dt) {
    // ||h|| is largest where |z| and x^2 + y^2 are; sample the path densely.
    double worst = 0.0;
    const long steps = std::max(1L, static_cast<long>(std::ceil(*T / *dt - 1e-9)));
    const double step = *T / static_cast<double>(steps);
    for (int k = 0; k <= 64; ++k) {
      const double u = k / 64.0;
      const LorentzianParams p{in.start.x + u * (in.end.x - in.start.x),
                               in.start.y + u * (in.end.y - in.start.y),
                               in.start.z + u * (in.end.z - in.start.z)};
      worst = std::max(worst, lorentzian_matrix(p).operator_norm());
    }
    if (step * worst / in.hbar > kMaxStepNorm) {
      physics(out, "dt", "dt*||h||/hbar reaches " + format_number(step * worst / in.hbar) +
                             " along the path (limit 0.5)");
    }
  }
  return in;
}

struct ContinuumInputs {
  ContinuumConfig config;
  CVector potential;
  CVector psi0;
  double dt = 0.0;
  long steps = 0;
  long snapshot_every = 1;
  bool ready = false;
};

ContinuumInputs check_continuum(const ScenarioConfig& c, std::vector<Diagnostic>& out) {
  ContinuumInputs in;
  Schema s(c.params, "", out);
  if (!s.ok()) return in;
  s.allow({"command", "seed", "output", "L", "N", "m", "hbar", "potential", "psi0", "dt",
           "t_final", "snapshot_every"});
  s.string("output", false);
  const std::size_t before = out.size();

  const auto L = s.number("L", true, Bound::Positive);
  const auto N = s.integer("N", true, 8);
  const auto m = s.number("m", true, Bound::Positive);
  const auto hbar = check_hbar(s);
  const auto dt = s.number("dt", true, Bound::Positive);
  const auto t_final = s.number("t_final", true, Bound::Positive);
  if (auto every = s.integer("snapshot_every", false, 1)) in.snapshot_every = *every;
  const bool grid_ok = L && N && m && hbar;
  if (grid_ok) in.config = ContinuumConfig{*L, *N, *m, *hbar};

  if (const json* p = s.object("potential", true)) {
    Schema ps(*p, "potential", out);
    const auto kind = ps.string("kind", true, {"complex_gaussian", "table"});
    if (kind == "complex_gaussian") {
      ps.allow({"kind", "amplitude_re", "amplitude_im", "center", "width"});
      const auto are = ps.number("amplitude_re", true);
      const auto aim = ps.number("amplitude_im", true);
      const auto center = ps.number("center", true);
      const auto width = ps.number("width", true, Bound::Positive);
      if (grid_ok && are && aim && center && width) {
        in.potential = complex_gaussian_potential(in.config, Complex(*are, *aim), *center, *width);
      }
    } else if (kind == "table") {
      if (auto v = check_complex_vector(*p, "potential", N ? *N : -1, out, true); v && grid_ok) {
        in.potential = *v;
      }
    }
  }

  if (const json* p = s.object("psi0", true)) {
    Schema ps(*p, "psi0", out);
    const auto kind = ps.string("kind", true, {"gaussian", "plane_wave", "table"});
    if (kind == "gaussian") {
      ps.allow({"kind", "center", "width", "k0"});
      const auto center = ps.number("center", true);
      const auto width = ps.number("width", true, Bound::Positive);
      const auto k0 = ps.number("k0", false);
      if (grid_ok && center && width) {
        in.psi0 = gaussian_packet(in.config, *center, *width, k0.value_or(0.0));
      }
    } else if (kind == "plane_wave") {
      ps.allow({"kind", "mode"});
      const auto mode = ps.integer("mode", true, std::numeric_limits<long>::min());
      if (grid_ok && mode) in.psi0 = plane_wave(in.config, *mode);
    } else if (kind == "table") {
      if (auto v = check_complex_vector(*p, "psi0", N ? *N : -1, out, true); v && grid_ok) {
        in.psi0 = *v;
      }
    }
  }

  if (dt && t_final) {
    in.dt = *dt;
    if (auto steps = step_count(*t_final, *dt)) {
      in.steps = *steps;
    } else {
      physics(out, "t_final", "t_final must be an integer multiple of dt");
    }
  }
  if (out.size() != before || in.potential.size() == 0 || in.psi0.size() == 0) return in;

  const NhMatrix h = discretize(in.config, in.potential);
  const double step_norm = *dt * h.operator_norm() / in.config.hbar;
  if (step_norm > kMaxStepNorm) {
    physics(out, "dt", "dt*||h||/hbar = " + format_number(step_norm) + " exceeds 0.5");
    return in;
  }
  if (in.steps < 2 * in.snapshot_every) {
    physics(out, "snapshot_every", "run must produce at least 3 snapshots");
    return in;
  }
  in.ready = true;
  return in;
}

std::vector<Diagnostic> check_common(const ScenarioConfig& c) {
  std::vector<Diagnostic> out;
  if (!c.params.is_object()) return out;
  if (c.params.contains("command")) {
    const json& cmd = c.params.at("command");
    if (!cmd.is_string() || cmd.get<std::string>() != command_name(c.command)) {
      out.push_back({"schema", "command",
                     "config is for a different command than \"" +
                         std::string(command_name(c.command)) + "\""});
    }
  }
  if (c.params.contains("seed") && !c.params.at("seed").is_number_unsigned()) {
    out.push_back({"schema", "seed", "must be a non-negative integer"});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Execution

std::string output_name(const ScenarioConfig& c, const char* fallback) {
  if (c.params.contains("output") && c.params.at("output").is_string()) {
    return c.params.at("output").get<std::string>();
  }
  return fallback;
}

std::filesystem::path emit(const ScenarioConfig& c, const char* fallback, const std::string& body) {
  const auto path = c.out_dir / output_name(c, fallback);
  write_atomic(path, body);
  log(LogLevel::Info, "wrote " + path.string());
  return path;
}

std::filesystem::path run_decompose(const ScenarioConfig& c, const DecomposeInputs& in) {
  const BiorthogonalSystem sys = biorthogonal_decompose(*in.h, in.tol);
  return emit(c, "decomposition.json", decomposition_report(*in.h, sys).dump(2) + "\n");
}

StatePair initial_pair(const BiorthogonalSystem& sys, const StateInputs& in, double hbar,
                       std::uint64_t seed) {
  const CVector psi = in.psi ? *in.psi : random_state(sys.dimension(), seed);
  if (in.phibar) {
    StatePair s;
    s.psi = psi;
    s.phibar = *in.phibar;
    s.hbar = hbar;
    return s;
  }
  return make_state_pair(sys, psi, in.csq, hbar);
}

std::filesystem::path run_evolve(const ScenarioConfig& c, const EvolveInputs& in) {
  const NhMatrix& h = *in.h;
  const Eigen::Index n = h.size();
  const bool need_sys = in.method == "exact" || !in.state.phibar;
  std::optional<BiorthogonalSystem> sys;
  if (need_sys) sys = biorthogonal_decompose(h);

  StatePair s0;
  if (sys) {
    s0 = initial_pair(*sys, in.state, in.hbar, c.seed);
  } else {
    s0.psi = in.state.psi ? *in.state.psi : random_state(n, c.seed);
    s0.phibar = *in.state.phibar;
    s0.hbar = in.hbar;
  }

  std::vector<std::string> header{"t"};
  for (const char* name : {"psi", "phibar"}) {
    for (Eigen::Index k = 1; k <= n; ++k) {
      header.push_back(std::string(name) + "_" + std::to_string(k) + "_re");
      header.push_back(std::string(name) + "_" + std::to_string(k) + "_im");
    }
  }
  for (const char* col : {"overlap_re", "overlap_im", "right_norm"}) header.emplace_back(col);
  CsvTable table(std::move(header));

  double last_t = -1.0;
  auto record = [&](const StatePair& s) {
    std::vector<double> row{s.t};
    for (const CVector* v : {&s.psi, &s.phibar}) {
      for (Eigen::Index k = 0; k < n; ++k) {
        row.push_back((*v)(k).real());
        row.push_back((*v)(k).imag());
      }
    }
    const Complex ov = overlap(s);
    row.push_back(ov.real());
    row.push_back(ov.imag());
    row.push_back(right_norm(s));
    table.add_row(row);
    last_t = s.t;
  };

  if (in.method == "rk4") {
    const StatePair final_state = evolve_rk4(h, s0, in.dt, in.steps, record, in.record_every);
    if (final_state.t != last_t) record(final_state);
  } else {
    for (long k = 0; k <= in.steps; k += in.record_every) {
      record(evolve_exact(*sys, s0, static_cast<double>(k) * in.dt));
    }
    if (in.steps % in.record_every != 0) record(evolve_exact(*sys, s0, in.t_final));
  }
  return emit(c, "trajectory.csv", table.str());
}

std::filesystem::path run_verify(const ScenarioConfig& c, const VerifyInputs& in) {
  const NhMatrix& h = *in.h;
  const BiorthogonalSystem sys = biorthogonal_decompose(h, in.tol);
  const StatePair state = initial_pair(sys, in.state, in.hbar, c.seed);
  const CanonicalReport rep = verify_canonical(h, sys, state, in.fd_step);

  // On-shell Lagrangian: psidot from the equations of motion.
  const StateDerivative rhs = schrodinger_rhs(h.matrix(), state);
  const Complex on_shell = lagrangian_value(h, state, rhs.dpsi);

  json report = json::object();
  report["n"] = h.size();
  report["seed"] = c.seed;
  put_complex(report, "hamiltonian_value", rep.hamiltonian_value);
  put_complex(report, "modal_value", rep.modal_value);
  report["hamiltonian_modal_gap"] = std::abs(rep.hamiltonian_value - rep.modal_value);
  report["rhs_mismatch"] = rep.rhs_mismatch;
  report["grad_mismatch"] = rep.grad_mismatch;
  put_complex(report, "lagrangian_on_shell", on_shell);
  put_complex(report, "overlap", overlap(state));
  return emit(c, "canonical_report.json", report.dump(2) + "\n");
}

std::filesystem::path run_sweep(const ScenarioConfig& c, const SweepInputs& in) {
  const SweepPath path = SweepPath::linear(in.start, in.end, in.duration, in.samples);
  const StatePair s0 = lorentzian_initial_state(in.start, in.csq, in.hbar);
  const ActionRecord rec = sweep_adiabatic(path, s0, in.dt);

  CsvTable table({"t", "I_1", "I_2", "deviation_1", "deviation_2", "overlap_re", "overlap_im"});
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    table.add_row({rec.times[k], rec.actions[k][0].real(), rec.actions[k][1].real(),
                   rec.deviations[k][0], rec.deviations[k][1], rec.overlaps[k].real(),
                   rec.overlaps[k].imag()});
  }
  log(LogLevel::Info, "sweep max deviation " + format_number(rec.max_deviation()));
  return emit(c, "sweep.csv", table.str());
}

std::filesystem::path run_continuum(const ScenarioConfig& c, const ContinuumInputs& in) {
  const ContinuumConfig& cfg = in.config;
  const double dx = cfg.dx();
  const NhMatrix h = discretize(cfg, in.potential);
  const LatticeField field0 = make_lattice_field(cfg, in.potential, in.psi0);

  std::vector<LatticeField> snapshots;
  (void)evolve_rk4(
      h, to_state(field0, cfg.hbar), in.dt, in.steps,
      [&](const StatePair& s) { snapshots.push_back(to_field(s, in.potential)); },
      in.snapshot_every);

  CsvTable table({"t", "Q_re", "Q_im", "continuity_residual", "right_norm"});
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    const Complex q = lattice_charge(snapshots[k], dx);
    double residual = std::nan("");
    if (k > 0 && k + 1 < snapshots.size()) {
      residual = continuity_residual(std::span(snapshots).subspan(k - 1, 3), cfg);
    }
    table.add_row({snapshots[k].t, q.real(), q.imag(), residual,
                   snapshots[k].psi.squaredNorm() * dx});
  }
  return emit(c, "continuum.csv", table.str());
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "decompose") return Command::Decompose;
  if (name == "evolve") return Command::Evolve;
  if (name == "verify") return Command::Verify;
  if (name == "sweep") return Command::Sweep;
  if (name == "continuum") return Command::Continuum;
  return std::nullopt;
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::Decompose: return "decompose";
    case Command::Evolve: return "evolve";
    case Command::Verify: return "verify";
    case Command::Sweep: return "sweep";
    case Command::Continuum: return "continuum";
  }
  return "unknown";
}

json to_json(const std::vector<Diagnostic>& diagnostics) {
  json arr = json::array();
  for (const auto& d : diagnostics) {
    arr.push_back({{"kind", d.kind}, {"path", d.path}, {"message", d.message}});
  }
  return arr;
}

std::vector<Diagnostic> validate(const ScenarioConfig& config) {
  std::vector<Diagnostic> out = check_common(config);
  switch (config.command) {
    case Command::Decompose: (void)check_decompose(config, out); break;
    case Command::Evolve: (void)check_evolve(config, out); break;
    case Command::Verify: (void)check_verify(config, out); break;
    case Command::Sweep: (void)check_sweep(config, out); break;
    case Command::Continuum: (void)check_continuum(config, out); break;
  }
  return out;
}

RunResult run(const ScenarioConfig& config) {
  RunResult result;
  auto config_failure = [&](std::vector<Diagnostic> diags) {
    const bool io = std::any_of(diags.begin(), diags.end(),
                                [](const Diagnostic& d) { return d.kind == "io"; });
    result.exit_code = io ? kExitIo : kExitConfig;
    result.error = io ? "IoError" : "ConfigError";
    result.message = diags.front().path + ": " + diags.front().message;
    result.diagnostics = std::move(diags);
  };

  try {
    std::vector<Diagnostic> diags = check_common(config);
    std::filesystem::path artifact;
    switch (config.command) {
      case Command::Decompose: {
        auto in = check_decompose(config, diags);
        if (!diags.empty()) break;
        artifact = run_decompose(config, in);
        break;
      }
      case Command::Evolve: {
        auto in = check_evolve(config, diags);
        if (!diags.empty()) break;
        artifact = run_evolve(config, in);
        break;
      }
      case Command::Verify: {
        auto in = check_verify(config, diags);
        if (!diags.empty()) break;
        artifact = run_verify(config, in);
        break;
      }
      case Command::Sweep: {
        auto in = check_sweep(config, diags);
        if (!diags.empty()) break;
        artifact = run_sweep(config, in);
        break;
      }
      case Command::Continuum: {
        auto in = check_continuum(config, diags);
        if (!diags.empty()) break;
        artifact = run_continuum(config, in);
        break;
      }
    }
    if (!diags.empty()) {
      config_failure(std::move(diags));
      return result;
    }
    result.artifacts.push_back(artifact);
  } catch (const Error& e) {
    result.exit_code = kExitCompute;
    result.error = std::string(to_string(e.code()));
    result.message = e.what();
  } catch (const IoError& e) {
    result.exit_code = kExitIo;
    result.error = "IoError";
    result.message = e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    result.exit_code = kExitIo;
    result.error = "IoError";
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = kExitConfig;
    result.error = "ConfigError";
    result.message = e.what();
  }
  return result;
}

ScenarioConfig load_config(Command command, const std::filesystem::path& file,
                           const std::filesystem::path& out_dir,
                           std::optional<std::uint64_t> seed) {
  ScenarioConfig config;
  config.command = command;
  config.params = json::parse(read_file(file), nullptr, true, /*ignore_comments=*/false);
  config.out_dir = out_dir;
  config.base_dir = file.has_parent_path() ? file.parent_path() : std::filesystem::path(".");
  if (seed) {
    config.seed = *seed;
  } else if (config.params.is_object() && config.params.contains("seed") &&
             config.params.at("seed").is_number_unsigned()) {
    config.seed = config.params.at("seed").get<std::uint64_t>();
  }
  return config;
}

}  // namespace biham::cli
