#include "bcg/scenario.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iterator>
#include <numbers>
#include <set>
#include <sstream>

#include "bcg/experiments.hpp"
#include "bcg/functionals.hpp"
#include "bcg/ncla_suite.hpp"
#include "bcg/quermass.hpp"
#include "bcg/randgeom.hpp"
#include "bcg/symmetrize.hpp"

namespace bcg {

using nlohmann::json;

namespace {

// ---- line tracking -------------------------------------------------------

struct LineCounter {
  int line = 1;
  bool last_newline = false;
};

// Char iterator that counts newlines as the parser consumes them.
class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator() = default;
  CountingIterator(const char* p, LineCounter* c) : p_(p), c_(c) {}
  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    if (c_) {
      c_->last_newline = *p_ == '\n';
      if (c_->last_newline) ++c_->line;
    }
    ++p_;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator t = *this;
    ++*this;
    return t;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }

 private:
  const char* p_ = nullptr;
  LineCounter* c_ = nullptr;
};

std::string escape_token(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '~') out += "~0";
    else if (ch == '/') out += "~1";
    else out += ch;
  }
  return out;
}

// Builds the DOM and records the line where each value starts.
class LineSax {
 public:
  LineSax(json& root, LineCounter& counter, std::map<std::string, int>& lines)
      : dom_(root), counter_(counter), lines_(lines) {}

  bool null() { return value([&] { return dom_.null(); }); }
  bool boolean(bool v) { return value([&] { return dom_.boolean(v); }); }
  bool number_integer(json::number_integer_t v) { return value([&] { return dom_.number_integer(v); }); }
  bool number_unsigned(json::number_unsigned_t v) { return value([&] { return dom_.number_unsigned(v); }); }
  bool number_float(json::number_float_t v, const std::string& s) {
    return value([&] { return dom_.number_float(v, s); });
  }
  bool string(std::string& v) { return value([&] { return dom_.string(v); }); }
  bool binary(json::binary_t& v) { return value([&] { return dom_.binary(v); }); }

  bool start_object(std::size_t n) {
    mark();
    frames_.push_back({false, 0, ""});
    return dom_.start_object(n);
  }
  bool key(std::string& k) {
    frames_.back().key = k;
    lines_[path() ] = counter_.line;
    return dom_.key(k);
  }
  bool end_object() {
    frames_.pop_back();
    after_value();
    return dom_.end_object();
  }
  bool start_array(std::size_t n) {
    mark();
    frames_.push_back({true, 0, ""});
    return dom_.start_array(n);
  }
  bool end_array() {
    frames_.pop_back();
    after_value();
    return dom_.end_array();
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) {
    throw SchemaError(counter_.line, std::string("malformed JSON: ") + ex.what());
  }

 private:
  struct Frame {
    bool array;
    int index;
    std::string key;
  };

  std::string path() const {
    std::string p;
    for (const auto& f : frames_) p += "/" + (f.array ? std::to_string(f.index) : escape_token(f.key));
    return p;
  }
  void mark() {
    if (frames_.empty() || frames_.back().array) {
      // Scalars may have consumed one char of lookahead.
      lines_[path()] = counter_.line - (counter_.last_newline ? 1 : 0);
    }
  }
  void after_value() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }
  template <class F>
  bool value(F&& f) {
    mark();
    after_value();
    return f();
  }

  nlohmann::detail::json_sax_dom_parser<json> dom_;
  LineCounter& counter_;
  std::map<std::string, int>& lines_;
  std::vector<Frame> frames_;
};

// ---- schema helpers ------------------------------------------------------

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "schema_version", "id",      "experiment", "field",  "n",     "r",         "samples",      "seed",
      "workers",        "bodies",  "m",          "dual",   "g",     "planes",    "rounds",       "aspect",
      "inner",          "outer",   "trials",     "dirs",   "volume_samples"};
  return keys;
}

int line_of(const Scenario& s, std::string pointer) {
  while (true) {
    const auto it = s.lines.find(pointer);
    if (it != s.lines.end()) return it->second;
    if (pointer.empty()) return 0;
    pointer.resize(pointer.rfind('/'));
  }
}

[[noreturn]] void fail(const Scenario& s, const std::string& pointer, const std::string& what) {
  throw SchemaError(line_of(s, pointer), pointer.empty() ? what : pointer + ": " + what);
}

const json& need(const Scenario& s, const json& obj, const std::string& pointer, const std::string& key) {
  if (!obj.contains(key)) fail(s, pointer, "missing key '" + key + "'");
  return obj.at(key);
}

double as_number(const Scenario& s, const json& v, const std::string& pointer) {
  if (!v.is_number()) fail(s, pointer, "expected a number");
  return v.get<double>();
}

std::int64_t as_integer(const Scenario& s, const json& v, const std::string& pointer, std::int64_t lo) {
  if (!v.is_number_integer()) fail(s, pointer, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo) fail(s, pointer, "must be at least " + std::to_string(lo));
  return x;
}

int p_of(const Scenario& s) { return real_dim(s.field); }

// Scalar as a number (real part) or an array of p components.
Scalar parse_scalar(const Scenario& s, const json& v, const std::string& pointer) {
  const int p = p_of(s);
  double c[4] = {0, 0, 0, 0};
  if (v.is_number()) {
    c[0] = v.get<double>();
  } else if (v.is_array()) {
    if (static_cast<int>(v.size()) != p) fail(s, pointer, "scalar needs " + std::to_string(p) + " components");
    for (int q = 0; q < p; ++q) c[q] = as_number(s, v[static_cast<std::size_t>(q)], pointer + "/" + std::to_string(q));
  } else {
    fail(s, pointer, "expected a scalar");
  }
  return Scalar::from_components(s.field, std::span<const double>(c, static_cast<std::size_t>(p)));
}

// Point as n p reals, or n scalars.
Vec parse_point(const Scenario& s, const json& v, const std::string& pointer) {
  const int p = p_of(s), d = s.n * p;
  if (!v.is_array()) fail(s, pointer, "expected a point");
  Vec x(d);
  if (static_cast<int>(v.size()) == d && (d == s.n ? true : v[0].is_number())) {
    for (int i = 0; i < d; ++i) x[i] = as_number(s, v[static_cast<std::size_t>(i)], pointer + "/" + std::to_string(i));
    return x;
  }
  if (static_cast<int>(v.size()) != s.n)
    fail(s, pointer, "point needs " + std::to_string(d) + " reals or " + std::to_string(s.n) + " scalars");
  for (int i = 0; i < s.n; ++i) {
    const Scalar a = parse_scalar(s, v[static_cast<std::size_t>(i)], pointer + "/" + std::to_string(i));
    for (int q = 0; q < p; ++q) x[i * p + q] = a.x[q];
  }
  return x;
}

FMat parse_matrix(const Scenario& s, const json& v, const std::string& pointer) {
  if (!v.is_array() || static_cast<int>(v.size()) != s.n) fail(s, pointer, "expected " + std::to_string(s.n) + " rows");
  FMat a(s.field, s.n, s.n);
  for (int i = 0; i < s.n; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    const std::string rp = pointer + "/" + std::to_string(i);
    if (!row.is_array() || static_cast<int>(row.size()) != s.n) fail(s, rp, "expected " + std::to_string(s.n) + " entries");
    for (int j = 0; j < s.n; ++j) a(i, j) = parse_scalar(s, row[static_cast<std::size_t>(j)], rp + "/" + std::to_string(j));
  }
  return a;
}

FVector to_fvector(Field f, const Vec& x) {
  return FVector::from_real(f, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

// ---- defaults ------------------------------------------------------------

json default_config(const std::string& e) {
  json c{{"schema_version", kSchemaVersion}, {"id", e}, {"experiment", e}, {"field", "C"}, {"n", 2}, {"seed", 1},
         {"workers", 1}};
  const json unit_ball{{"type", "ball"}, {"radius", 1.0}};
  if (e == "selftest") {
    c["field"] = "H";
    c["trials"] = 1000;
  } else if (e == "brs") {
    c["bodies"] = json::array({json{{"type", "box"}, {"half", 1.0}}});
    c["r"] = 2.0;
    c["samples"] = 1000000;
  } else if (e == "bp-check") {
    c["bodies"] = json::array({unit_ball});
    c["samples"] = 1000000;
  } else if (e == "symmetrize") {
    c["bodies"] = json::array({json{{"type", "ellipsoid"}, {"form", json::array({json::array({0.25, 0}), json::array({0, 4.0})})}}});
    c["planes"] = json::array({json{{"type", "field"}, {"normal", json::array({1, 0})}},
                               json{{"type", "field"}, {"normal", json::array({0, 1})}},
                               json{{"type", "field"}, {"normal", json::array({json::array({1, 0.3}), json::array({-0.8, 0.5})})}}});
    c["rounds"] = 20;
    c["dirs"] = 400;
    c["samples"] = 200000;
  } else if (e == "quermass") {
    c["bodies"] = json::array({unit_ball});
    c["m"] = 1;
    c["dual"] = true;
    c["outer"] = 20000;
    c["inner"] = 4096;
  } else if (e == "intersection") {
    c["bodies"] = json::array({json{{"type", "box"}, {"half", 1.0}}});
    c["outer"] = 20000;
    c["inner"] = 256;
  } else if (e == "santalo") {
    c["bodies"] = json::array({json{{"type", "l1ball"}, {"radius", 1.0}}});
    c["outer"] = 1000000;
  } else if (e == "counterexample") {
    c["aspect"] = std::sqrt(3.0);
    c["r"] = 2.0;
    c["samples"] = 10000000;
  } else if (e == "conjecture") {
    c["bodies"] = json::array({json{{"type", "ellipsoid"}, {"form", json::array({json::array({0.25, 0}), json::array({0, 4.0})})}}});
    c["m"] = 1;
    c["outer"] = 200000;
  }
  return c;
}

// Fills unset budgets so the persisted config is complete.
void fill_defaults(json& c, const std::string& e) {
  const json d = default_config(e);
  for (const auto& [k, v] : d.items())
    if (!c.contains(k) && k != "bodies" && k != "planes") c[k] = v;
  if (!c.contains("samples")) c["samples"] = 1000000;
  if (!c.contains("r")) c["r"] = 2.0;
  if (!c.contains("volume_samples")) c["volume_samples"] = 1000000;
  if ((e == "quermass" || e == "intersection" || e == "santalo" || e == "conjecture") && !c.contains("outer"))
    c["outer"] = 20000;
  if ((e == "quermass" || e == "intersection") && !c.contains("inner")) c["inner"] = 4096;
}

void apply_overrides(json& c, const Overrides& ov) {
  if (ov.samples) {
    c["samples"] = *ov.samples;
    if (c.contains("outer")) c["outer"] = *ov.samples;
    if (c.contains("trials")) c["trials"] = *ov.samples;
  }
  if (ov.seed) c["seed"] = *ov.seed;
  if (ov.workers) c["workers"] = *ov.workers;
  if (ov.field) c["field"] = *ov.field;
  if (ov.aspect) c["aspect"] = *ov.aspect;
  if (ov.r) c["r"] = *ov.r;
}

Scenario finish_scenario(Scenario s, const std::string& experiment, const Overrides& ov) {
  json& c = s.config;
  if (!c.is_object()) fail(s, "", "config must be a JSON object");
  for (const auto& [k, v] : c.items())
    if (!known_keys().count(k)) fail(s, "/" + escape_token(k), "unknown key '" + k + "'");
  const json& ver = need(s, c, "", "schema_version");
  if (as_integer(s, ver, "/schema_version", 0) != kSchemaVersion)
    fail(s, "/schema_version", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  const json& id = need(s, c, "", "id");
  if (!id.is_string() || id.get<std::string>().empty()) fail(s, "/id", "expected a non-empty string");
  if (c.contains("experiment")) {
    if (!c["experiment"].is_string()) fail(s, "/experiment", "expected a string");
    if (c["experiment"].get<std::string>() != experiment)
      fail(s, "/experiment", "config is for '" + c["experiment"].get<std::string>() + "', not '" + experiment + "'");
  }
  c["experiment"] = experiment;
  fill_defaults(c, experiment);
  apply_overrides(c, ov);

  s.id = c["id"].get<std::string>();
  s.experiment = experiment;
  if (!c["field"].is_string()) fail(s, "/field", "expected R, C or H");
  try {
    s.field = parse_field(c["field"].get<std::string>());
  } catch (const InvalidArgument& e) {
    fail(s, "/field", e.what());
  }
  s.n = static_cast<int>(as_integer(s, c["n"], "/n", 1));
  if (s.n * real_dim(s.field) > kMaxDim) fail(s, "/n", "real dimension too large");
  s.r = as_number(s, c["r"], "/r");
  if (!(s.r >= 0.0)) fail(s, "/r", "must be nonnegative");
  s.samples = static_cast<std::uint64_t>(as_integer(s, c["samples"], "/samples", 1));
  s.seed = static_cast<std::uint64_t>(as_integer(s, c["seed"], "/seed", 0));
  s.workers = static_cast<int>(as_integer(s, c["workers"], "/workers", 1));
  for (const char* k : {"m", "rounds", "inner", "outer", "trials", "dirs", "volume_samples"})
    if (c.contains(k)) as_integer(s, c[k], std::string("/") + k, 1);
  if (c.contains("dual") && !c["dual"].is_boolean()) fail(s, "/dual", "expected true or false");
  if (c.contains("aspect") && !(as_number(s, c["aspect"], "/aspect") > 0.0)) fail(s, "/aspect", "must be positive");
  if (c.contains("bodies")) {
    if (!c["bodies"].is_array() || c["bodies"].empty()) fail(s, "/bodies", "expected a non-empty array");
    for (std::size_t i = 0; i < c["bodies"].size(); ++i)
      build_body(s, c["bodies"][i], "/bodies/" + std::to_string(i));  // validate early
  }
  if (c.contains("planes") && !c["planes"].is_array()) fail(s, "/planes", "expected an array");
  if (c.contains("g")) parse_matrix(s, c["g"], "/g");
  return s;
}

// ---- experiment runners --------------------------------------------------

class Runner {
 public:
  explicit Runner(const Scenario& s) : s_(s), start_(std::chrono::steady_clock::now()) {}

  void row(const std::string& quantity, Estimate e) {
    if (e.is_exact()) e.seed = s_.seed;
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    out.rows.push_back({s_.id + ":" + quantity, s_.field, s_.n, s_.r, e, t});
  }
  void exact(const std::string& quantity, double v) { row(quantity, Estimate::exact(v)); }
  void verdict(bool ok, const std::string& what) {
    out.notes.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
    if (!ok) out.accepted = false;
  }
  void note(const std::string& what) { out.notes.push_back(what); }
  void restart() { start_ = std::chrono::steady_clock::now(); }

  RunResult out;

 private:
  const Scenario& s_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(6) << v;
  return o.str();
}

std::uint64_t get_u(const Scenario& s, const char* key) { return s.config.at(key).get<std::uint64_t>(); }

std::vector<ConvexBody> bodies_of(const Scenario& s) {
  if (!s.config.contains("bodies")) fail(s, "", "missing key 'bodies'");
  std::vector<ConvexBody> out;
  for (std::size_t i = 0; i < s.config["bodies"].size(); ++i)
    out.push_back(build_body(s, s.config["bodies"][i], "/bodies/" + std::to_string(i)));
  return out;
}

FunctionalOptions fopts(const Scenario& s) {
  FunctionalOptions o;
  o.samples = s.samples;
  o.seed = s.seed;
  o.workers = s.workers;
  o.volume_samples = get_u(s, "volume_samples");
  return o;
}

QuermassOptions qopts(const Scenario& s) {
  QuermassOptions o;
  o.outer = get_u(s, "outer");
  o.inner = s.config.contains("inner") ? get_u(s, "inner") : 4096;
  o.seed = s.seed;
  o.workers = s.workers;
  o.volume_samples = get_u(s, "volume_samples");
  return o;
}

int m_of(const Scenario& s) {
  const int m = s.config.contains("m") ? s.config["m"].get<int>() : 1;
  if (m >= s.n) fail(s, "/m", "need m < n");
  return m;
}

void run_selftest(const Scenario& s, Runner& r) {
  const int trials = s.config.contains("trials") ? s.config["trials"].get<int>() : 1000;
  for (const auto& p : ncla_property_suite(s.field, trials, s.seed)) {
    Estimate e = Estimate::exact(p.max_rel_error);
    e.n_samples = static_cast<std::uint64_t>(p.checks);
    e.seed = s.seed;
    r.row(p.name, e);
    r.verdict(p.passed, p.name + " max relative error " + fmt(p.max_rel_error));
  }
}

void run_brs(const Scenario& s, Runner& r) {
  std::vector<ConvexBody> b = bodies_of(s);
  if (b.size() == 1) b.assign(static_cast<std::size_t>(s.n), b.front());
  if (static_cast<int>(b.size()) != s.n) fail(s, "/bodies", "need 1 or n bodies");
  const BrsGap g = brs_gap(b, Weight::power(s.r), fopts(s));
  r.row("B_K", g.B_K);
  r.exact("B_balls", g.B_balls);
  r.row("gap", Estimate{g.gap, g.sigma, g.B_K.n_samples, s.seed, false});
  r.verdict(g.gap >= -3.0 * g.sigma, "gap " + fmt(g.gap) + " >= -3 sigma (" + fmt(g.sigma) + ")");
}

void run_bp(const Scenario& s, Runner& r) {
  BpOptions o;
  o.samples = s.samples;
  o.seed = s.seed;
  o.workers = s.workers;
  o.volume_samples = get_u(s, "volume_samples");
  if (s.config.contains("inner")) o.inner = s.config["inner"].get<int>();
  const BpResult res = bp_check(bodies_of(s), o);
  r.row("lhs", res.lhs);
  r.row("rhs", res.rhs);
  const double sigma = std::hypot(res.lhs.std_error, res.rhs.std_error);
  r.verdict(std::abs(res.rhs.mean - res.lhs.mean) <= 3.0 * sigma,
            "rhs " + fmt(res.rhs.mean) + " vs lhs " + fmt(res.lhs.mean) + " within 3 sigma (" + fmt(sigma) + ")");
}

void run_symmetrize(const Scenario& s, Runner& r) {
  const ConvexBody k = bodies_of(s).front();
  if (!s.config.contains("planes") || s.config["planes"].empty()) fail(s, "", "missing key 'planes'");
  struct Plane {
    bool real;
    RealHyperplane rh;
    FHyperplane fh;
  };
  std::vector<Plane> planes;
  for (std::size_t i = 0; i < s.config["planes"].size(); ++i) {
    const std::string ptr = "/planes/" + std::to_string(i);
    const json& pl = s.config["planes"][i];
    const json& type = need(s, pl, ptr, "type");
    const json& normal = need(s, pl, ptr, "normal");
    try {
      if (type == "real") {
        planes.push_back({true, RealHyperplane::from_normal(parse_point(s, normal, ptr + "/normal")), {}});
      } else if (type == "field") {
        planes.push_back({false, {}, FHyperplane::from_normal(to_fvector(s.field, parse_point(s, normal, ptr + "/normal")))});
      } else {
        fail(s, ptr + "/type", "expected 'real' or 'field'");
      }
    } catch (const InvalidArgument& e) {
      fail(s, ptr + "/normal", e.what());
    }
  }
  const int rounds = s.config.contains("rounds") ? s.config["rounds"].get<int>() : 1;
  const int dirs = s.config.contains("dirs") ? s.config["dirs"].get<int>() : 400;
  const Estimate v0 = k.volume(s.samples, derive_seed(s.seed, 0), s.workers);
  const double d0 = roundness_defect(k, dirs, s.seed);
  r.row("volume:0", v0);
  r.exact("defect:0", d0);
  ConvexBody cur = k;
  double d_last = d0;
  bool conserved = true;
  for (int round = 1; round <= rounds; ++round) {
    for (std::size_t i = 0; i < planes.size(); ++i) {
      SymmetrizeOptions o;
      o.seed = derive_seed(s.seed, static_cast<std::uint64_t>(round) * 1000 + i);
      cur = planes[i].real ? steiner(cur, planes[i].rh) : symmetrize_fhyperplane(cur, planes[i].fh, o);
    }
    const Estimate v = cur.volume(s.samples, derive_seed(s.seed, static_cast<std::uint64_t>(round)), s.workers);
    d_last = roundness_defect(cur, dirs, s.seed);
    r.row("volume:" + std::to_string(round), v);
    r.exact("defect:" + std::to_string(round), d_last);
    // Exact volumes still drift by rounding through the closed forms.
    const double slack = 1e-9 * std::abs(v0.mean);
    if (std::abs(v.mean - v0.mean) > 3.0 * std::hypot(v.std_error, v0.std_error) + slack) conserved = false;
  }
  r.verdict(conserved, "volume conserved within 3 sigma over " + std::to_string(rounds) + " rounds");
  r.note("roundness defect " + fmt(d0) + " -> " + fmt(d_last));
}

void run_quermass(const Scenario& s, Runner& r) {
  const ConvexBody k = bodies_of(s).front();
  const int m = m_of(s);
  const bool dual = s.config.contains("dual") ? s.config["dual"].get<bool>() : true;
  const QuermassOptions o = qopts(s);
  if (s.config.contains("g")) {
    const FMat g = parse_matrix(s, s.config["g"], "/g");
    const Comparison c = sl_invariance_test(k, m, g, dual, o);
    r.row("K", c.lhs);
    r.row("gK", c.rhs);
    r.row("difference", Estimate{c.difference, c.sigma, c.lhs.n_samples, s.seed, false});
    r.verdict(std::abs(c.margin_sigmas) <= 3.0, "SL invariance difference " + fmt(c.margin_sigmas) + " sigma");
    return;
  }
  r.row(dual ? "dual" : "affine", dual ? dual_affine_quermass(k, m, o) : affine_quermass(k, m, o));
}

void run_intersection(const Scenario& s, Runner& r) {
  const Comparison c = intersection_inequality_check(bodies_of(s), qopts(s));
  r.row("lhs", c.lhs);
  r.row("rhs", c.rhs);
  r.row("margin_sigmas", Estimate::exact(c.margin_sigmas));
  r.verdict(c.margin_sigmas >= -3.0, "margin " + fmt(c.margin_sigmas) + " sigma >= -3");
}

void run_santalo(const Scenario& s, Runner& r) {
  const SantaloReport rep = santalo_case(bodies_of(s).front(), qopts(s));
  r.row("identity:affine", rep.identity.lhs);
  r.row("identity:polar", rep.identity.rhs);
  r.row("inequality:inverse_volume", rep.inequality.lhs);
  r.row("inequality:rhs", rep.inequality.rhs);
  r.verdict(std::abs(rep.identity.margin_sigmas) <= 3.0, "identity residual " + fmt(rep.identity.margin_sigmas) + " sigma");
  r.verdict(rep.inequality.margin_sigmas >= -3.0, "inequality margin " + fmt(rep.inequality.margin_sigmas) + " sigma");
}

void run_counterexample(const Scenario& s, Runner& r) {
  if (s.field != Field::Complex || s.n != 2) fail(s, "/field", "counterexample runs in C^2");
  const double a = s.config.contains("aspect") ? s.config["aspect"].get<double>() : std::sqrt(3.0);
  const CounterexampleReport rep = counterexample(a, s.r, fopts(s));
  r.row("steiner", rep.steiner);
  r.exact("exact", rep.exact);
  r.row("delta", Estimate{rep.delta, rep.steiner.std_error, rep.steiner.n_samples, s.seed, false});
  r.row("control", rep.control);
  r.row("control_delta", Estimate{rep.control_delta, rep.control.std_error, rep.control.n_samples, s.seed, false});
  std::ostringstream u;
  for (int i = 0; i < rep.normal.size(); ++i) u << (i ? "," : "") << fmt(rep.normal[i]);
  r.note("real normal (" + u.str() + ")" + (rep.scanned ? " after scan" : ""));
  r.verdict(rep.delta_sigmas >= 3.0, "steiner delta " + fmt(rep.delta) + " = " + fmt(rep.delta_sigmas) + " sigma >= 3");
  r.verdict(rep.control_sigmas <= 3.0, "control delta " + fmt(rep.control_sigmas) + " sigma <= 3");
}

void run_conjecture(const Scenario& s, Runner& r) {
  const ConjectureReport rep = conjecture_eval(bodies_of(s).front(), m_of(s), qopts(s));
  r.row("conj:lhs", rep.conj.lhs);
  r.row("conj:rhs", rep.conj.rhs);
  r.row("iso:lhs", rep.iso.lhs);
  r.row("iso:rhs", rep.iso.rhs);
  r.note("EXPLORATION conj margin " + fmt(rep.conj.margin_sigmas) + " sigma, iso margin " +
         fmt(rep.iso.margin_sigmas) + " sigma");
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"selftest", "brs",      "bp-check",       "symmetrize", "quermass",
                                              "intersection", "santalo", "counterexample", "conjecture"};
  return names;
}

Scenario parse_scenario(const std::string& text, const std::string& experiment, const Overrides& ov) {
  Scenario s;
  LineCounter counter;
  LineSax sax(s.config, counter, s.lines);
  json::sax_parse(CountingIterator(text.data(), &counter), CountingIterator(text.data() + text.size(), nullptr), &sax);
  return finish_scenario(std::move(s), experiment, ov);
}

Scenario default_scenario(const std::string& experiment, const Overrides& ov) {
  bool known = false;
  for (const auto& e : experiment_names()) known = known || e == experiment;
  if (!known) throw InvalidArgument("unknown experiment '" + experiment + "'");
  Scenario s;
  s.config = default_config(experiment);
  return finish_scenario(std::move(s), experiment, ov);
}

ConvexBody build_body(const Scenario& s, const json& d, const std::string& ptr) {
  if (!d.is_object()) fail(s, ptr, "body descriptor must be an object");
  const json& type = need(s, d, ptr, "type");
  if (!type.is_string()) fail(s, ptr + "/type", "expected a string");
  const std::string t = type.get<std::string>();
  const int dim = s.n * p_of(s);
  auto point_or_zero = [&](const char* key) {
    return d.contains(key) ? parse_point(s, d[key], ptr + "/" + key) : Vec(Vec::Zero(dim));
  };
  try {
    if (t == "ball") {
      const double r = d.contains("radius") ? as_number(s, d["radius"], ptr + "/radius") : 1.0;
      return make_ball(s.field, s.n, point_or_zero("center"), r);
    }
    if (t == "ellipsoid") {
      const Vec c = point_or_zero("center");
      if (d.contains("form")) return make_ellipsoid(to_fvector(s.field, c), parse_matrix(s, d["form"], ptr + "/form"));
      const json& q = need(s, d, ptr, "real_form");
      const std::string qp = ptr + "/real_form";
      if (!q.is_array() || static_cast<int>(q.size()) != dim) fail(s, qp, "expected " + std::to_string(dim) + " rows");
      Mat m(dim, dim);
      for (int i = 0; i < dim; ++i) {
        const json& row = q[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) fail(s, qp + "/" + std::to_string(i), "bad row");
        for (int j = 0; j < dim; ++j) m(i, j) = as_number(s, row[static_cast<std::size_t>(j)], qp);
      }
      return make_real_ellipsoid(s.field, s.n, c, m);
    }
    if (t == "box") {
      if (d.contains("half")) {
        const double h = as_number(s, d["half"], ptr + "/half");
        return make_box(s.field, s.n, Vec::Constant(dim, -h), Vec::Constant(dim, h));
      }
      return make_box(s.field, s.n, parse_point(s, need(s, d, ptr, "lo"), ptr + "/lo"),
                      parse_point(s, need(s, d, ptr, "hi"), ptr + "/hi"));
    }
    if (t == "vpolytope") {
      const json& v = need(s, d, ptr, "vertices");
      if (!v.is_array()) fail(s, ptr + "/vertices", "expected an array of points");
      std::vector<Vec> pts;
      for (std::size_t i = 0; i < v.size(); ++i) pts.push_back(parse_point(s, v[i], ptr + "/vertices/" + std::to_string(i)));
      return make_vpolytope(s.field, s.n, pts);
    }
    if (t == "l1ball") {
      const double r = d.contains("radius") ? as_number(s, d["radius"], ptr + "/radius") : 1.0;
      return make_l1_ball(s.field, s.n, r);
    }
    if (t == "affine_image") {
      const ConvexBody inner = build_body(s, need(s, d, ptr, "body"), ptr + "/body");
      const FMat a = parse_matrix(s, need(s, d, ptr, "matrix"), ptr + "/matrix");
      return affine_image(inner, a, to_fvector(s.field, point_or_zero("offset")));
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    fail(s, ptr, e.what());
  }
  fail(s, ptr + "/type", "unknown body type '" + t + "'");
}

RunResult run_scenario(const Scenario& s) {
  Runner r(s);
  const std::string& e = s.experiment;
  if (e == "selftest") run_selftest(s, r);
  else if (e == "brs") run_brs(s, r);
  else if (e == "bp-check") run_bp(s, r);
  else if (e == "symmetrize") run_symmetrize(s, r);
  else if (e == "quermass") run_quermass(s, r);
  else if (e == "intersection") run_intersection(s, r);
  else if (e == "santalo") run_santalo(s, r);
  else if (e == "counterexample") run_counterexample(s, r);
  else if (e == "conjecture") run_conjecture(s, r);
  else throw InvalidArgument("unknown experiment '" + e + "'");
  return std::move(r.out);
}

const char* const kCsvHeader = "scenario_id,field,n,r,mean,stderr,samples,seed,wall_time_s";

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.scenario_id << ',' << field_tag(row.field) << ',' << row.n << ',' << std::setprecision(17) << row.r
        << ',' << row.value.mean << ',' << row.value.std_error << ',' << row.value.n_samples << ',' << row.value.seed
        << ',' << std::setprecision(6) << row.wall_time_s << '\n';
  }
}

json manifest(const Scenario& s, const RunResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"scenario_id", row.scenario_id},
                    {"mean", row.value.mean},
                    {"stderr", row.value.std_error},
                    {"samples", row.value.n_samples},
                    {"seed", row.value.seed},
                    {"insufficient", row.value.insufficient}});
  return json{{"scenario", s.config}, {"accepted", r.accepted}, {"notes", r.notes}, {"results", rows}};
}

}  // namespace bcg
