#include "nvk/descriptor.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include <json.hpp>

#include "nvk/expression.hpp"
#include "nvk/random.hpp"

namespace nvk {

using json = nlohmann::ordered_json;

DescriptorError::DescriptorError(const std::string& message, std::size_t line, std::size_t column, std::string path)
    : std::invalid_argument(message), line_(line), column_(column), path_(std::move(path)) {}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Position {
  std::size_t line = 0;
  std::size_t column = 0;
};

Position position_of(std::string_view text, std::size_t offset) {
  Position p{1, 1};
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

// Minimal scanner over raw JSON used only to map a path back to an offset.
class Locator {
 public:
  explicit Locator(std::string_view s) : s_(s) {}

  // Offset of the value addressed by `path`, or of the deepest prefix found.
  std::size_t find(const std::vector<std::string>& path) {
    pos_ = 0;
    ws();
    for (const std::string& token : path) {
      if (pos_ >= s_.size()) break;
      const std::size_t here = pos_;
      if (s_[pos_] == '{') {
        if (!enter_object(token)) return here;
      } else if (s_[pos_] == '[') {
        if (!enter_array(token)) return here;
      } else {
        return here;
      }
    }
    return pos_;
  }

 private:
  void ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\n' || s_[pos_] == '\r' || s_[pos_] == '\t')) ++pos_;
  }

  std::string string() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out += s_[pos_++];
    }
    ++pos_;
    return out;
  }

  void skip_value() {
    ws();
    if (pos_ >= s_.size()) return;
    const char c = s_[pos_];
    if (c == '"') {
      string();
    } else if (c == '{' || c == '[') {
      const char close = c == '{' ? '}' : ']';
      ++pos_;
      ws();
      while (pos_ < s_.size() && s_[pos_] != close) {
        if (c == '{') {
          ws();
          string();
          ws();
          ++pos_;  // colon
        }
        skip_value();
        ws();
        if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
        ws();
      }
      ++pos_;
    } else {
      while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '}' && s_[pos_] != ']' && s_[pos_] != ' ' &&
             s_[pos_] != '\n' && s_[pos_] != '\r' && s_[pos_] != '\t') {
        ++pos_;
      }
    }
  }

  bool enter_object(const std::string& key) {
    ++pos_;
    ws();
    while (pos_ < s_.size() && s_[pos_] != '}') {
      const std::string k = string();
      ws();
      ++pos_;  // colon
      ws();
      if (k == key) return true;
      skip_value();
      ws();
      if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
      ws();
    }
    return false;
  }

  bool enter_array(const std::string& token) {
    std::size_t index = 0;
    try {
      index = std::stoul(token);
    } catch (const std::exception&) {
      return false;
    }
    ++pos_;
    ws();
    for (std::size_t i = 0; pos_ < s_.size() && s_[pos_] != ']'; ++i) {
      if (i == index) return true;
      skip_value();
      ws();
      if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
      ws();
    }
    return false;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
    std::string pointer;
    for (const auto& p : path) pointer += "/" + p;
    Locator loc(text_);
    const Position pos = position_of(text_, loc.find(path));
    throw DescriptorError("descriptor:" + std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                              (pointer.empty() ? std::string("/") : pointer) + ": " + what,
                          pos.line, pos.column, pointer);
  }

  json parse() const {
    try {
      return json::parse(text_);
    } catch (const json::parse_error& e) {
      const Position pos = position_of(text_, e.byte == 0 ? 0 : e.byte - 1);
      throw DescriptorError("descriptor:" + std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                                ": invalid JSON",
                            pos.line, pos.column, "");
    }
  }

  using Path = std::vector<std::string>;

  static Path child(const Path& p, const std::string& key) {
    Path q = p;
    q.push_back(key);
    return q;
  }
  static Path child(const Path& p, std::size_t i) { return child(p, std::to_string(i)); }

  void only_keys(const json& obj, const Path& path, std::initializer_list<const char*> allowed) const {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok |= it.key() == a;
      if (!ok) fail(child(path, it.key()), "unknown field");
    }
  }

  const json& field(const json& obj, const Path& path, const char* key) const {
    if (!obj.contains(key)) fail(path, std::string("missing field '") + key + "'");
    return obj.at(key);
  }

  double number(const json& v, const Path& path) const {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s == "inf" || s == "+inf") return kInf;
      if (s == "-inf") return -kInf;
      try {
        const Expression e = Expression::parse(s);
        if (e.arity() == 0) {
          const double x = e({});
          if (std::isfinite(x)) return x;
        }
      } catch (const ExpressionError&) {
      }
      fail(path, "expected a number or constant expression, got '" + s + "'");
    }
    fail(path, "expected a number");
  }

  double finite(const json& v, const Path& path) const {
    const double x = number(v, path);
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
  }

  std::size_t count(const json& v, const Path& path, std::size_t min) const {
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
      fail(path, "expected an integer >= " + std::to_string(min));
    }
    return static_cast<std::size_t>(v.get<long long>());
  }

  const json& array(const json& v, const Path& path) const {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }

  Measure measure(const json& m, const Path& path) const {
    if (!m.is_object()) fail(path, "expected a measure object");
    const json& type_v = field(m, path, "type");
    if (!type_v.is_string()) fail(child(path, "type"), "expected a string");
    const std::string type = type_v.get<std::string>();

    if (type == "atomic") {
      only_keys(m, path, {"type", "dimension", "atoms"});
      const std::size_t dim = count(field(m, path, "dimension"), child(path, "dimension"), 1);
      const Path ap = child(path, "atoms");
      const json& atoms = array(field(m, path, "atoms"), ap);
      std::vector<Atom> out;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Path p = child(ap, i);
        const json& row = array(atoms[i], p);
        if (row.size() != dim + 1) fail(p, "atom must be [x_1, ..., x_k, weight] with k = " + std::to_string(dim));
        Atom a;
        for (std::size_t j = 0; j < dim; ++j) a.location.push_back(finite(row[j], child(p, j)));
        a.weight = finite(row[dim], child(p, dim));
        if (!(a.weight > 0.0)) fail(child(p, dim), "atomic weights must be strictly positive");
        out.push_back(std::move(a));
      }
      return Measure::atomic(dim, std::move(out));
    }

    if (type == "lebesgue") {
      only_keys(m, path, {"type", "dimension", "density", "support"});
      const std::size_t dim = count(field(m, path, "dimension"), child(path, "dimension"), 1);
      Density density = Density::one();
      if (m.contains("density")) density = parse_density(m.at("density"), child(path, "density"), dim);
      std::optional<Box> support;
      if (m.contains("support")) {
        const Path sp = child(path, "support");
        const json& rows = array(m.at("support"), sp);
        if (rows.size() != dim) fail(sp, "support needs one [lo, hi] pair per axis");
        std::vector<Interval> axes;
        for (std::size_t j = 0; j < dim; ++j) {
          const Path p = child(sp, j);
          const json& r = array(rows[j], p);
          if (r.size() != 2) fail(p, "expected [lo, hi]");
          const double lo = number(r[0], child(p, 0));
          const double hi = number(r[1], child(p, 1));
          if (!(lo <= hi)) fail(p, "support needs lo <= hi");
          axes.push_back({lo, hi});
        }
        support = Box(std::move(axes));
      }
      return Measure::with_density(dim, std::move(density), std::move(support));
    }

    if (type == "product") {
      only_keys(m, path, {"type", "factors"});
      const Path fp = child(path, "factors");
      const json& fs = array(field(m, path, "factors"), fp);
      if (fs.empty()) fail(fp, "product needs at least one factor");
      std::vector<Measure> factors;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        Measure f = measure(fs[i], child(fp, i));
        if (f.dimension() != 1) fail(child(fp, i), "product factors must be one-dimensional");
        factors.push_back(std::move(f));
      }
      return Measure::product(std::move(factors));
    }

    if (type == "pushforward2d") {
      only_keys(m, path, {"type", "base", "alpha", "beta", "gamma", "delta"});
      Measure base = measure(field(m, path, "base"), child(path, "base"));
      if (base.dimension() != 1) fail(child(path, "base"), "base must be one-dimensional");
      double c[4];
      const char* names[4] = {"alpha", "beta", "gamma", "delta"};
      for (int i = 0; i < 4; ++i) c[i] = finite(field(m, path, names[i]), child(path, names[i]));
      return Measure::pushforward_2d(std::move(base), c[0], c[1], c[2], c[3]);
    }

    if (type == "ladder") {
      only_keys(m, path, {"type", "base", "b", "beta"});
      Measure base = measure(field(m, path, "base"), child(path, "base"));
      if (base.dimension() != 1) fail(child(path, "base"), "base must be one-dimensional");
      const Path bp = child(path, "b");
      const json& bs = array(field(m, path, "b"), bp);
      if (bs.empty()) fail(bp, "ladder needs at least one coefficient");
      std::vector<double> b;
      for (std::size_t i = 0; i < bs.size(); ++i) {
        b.push_back(finite(bs[i], child(bp, i)));
        if (!(b.back() > 0.0)) fail(child(bp, i), "ladder coefficients must be positive");
      }
      const double scale = finite(field(m, path, "beta"), child(path, "beta"));
      if (!(scale > 0.0)) fail(child(path, "beta"), "beta must be positive");
      return Measure::ladder(std::move(base), std::move(b), scale);
    }

    if (type == "padded") {
      only_keys(m, path, {"type", "dimension", "axes", "base"});
      const std::size_t dim = count(field(m, path, "dimension"), child(path, "dimension"), 2);
      const Path xp = child(path, "axes");
      const json& axes_v = array(field(m, path, "axes"), xp);
      std::vector<std::size_t> axes;
      std::set<std::size_t> seen;
      for (std::size_t i = 0; i < axes_v.size(); ++i) {
        const std::size_t a = count(axes_v[i], child(xp, i), 0);
        if (a >= dim || !seen.insert(a).second) fail(child(xp, i), "axes must be distinct and below dimension");
        axes.push_back(a);
      }
      if (axes.empty() || axes.size() >= dim) fail(xp, "padding needs at least one base axis and one Lebesgue axis");
      Measure base = measure(field(m, path, "base"), child(path, "base"));
      if (base.dimension() != axes.size()) fail(child(path, "base"), "base dimension must equal the number of axes");
      return Measure::padded(std::move(base), std::move(axes), dim);
    }

    fail(child(path, "type"), "unknown measure type '" + type + "'");
  }

  Density parse_density(const json& v, const Path& path, std::size_t dim) const {
    std::string text;
    if (v.is_number()) {
      text = v.dump();
    } else if (v.is_string()) {
      text = v.get<std::string>();
    } else {
      fail(path, "density must be an expression string");
    }
    Expression e = [&] {
      try {
        return Expression::parse(text);
      } catch (const ExpressionError& err) {
        fail(path, err.what());
      }
    }();
    if (e.arity() > dim) fail(path, "density uses t" + std::to_string(e.arity()) + " but dimension is " + std::to_string(dim));
    // Spot check: the density must be finite and nonnegative.
    std::vector<double> t(dim, 0.0);
    for (std::uint64_t s = 0; s < 64; ++s) {
      for (std::size_t j = 0; j < dim; ++j) t[j] = s == 0 ? 0.0 : -10.0 + 20.0 * halton(s, j == 0 ? 2 : (j == 1 ? 3 : 5 + 2 * static_cast<unsigned>(j)));
      const double w = e(t);
      if (!std::isfinite(w) || w < 0.0) fail(path, "density must be finite and nonnegative");
    }
    if (e.arity() == 0 && e({}) == 1.0) return Density::one();
    Density d;
    d.fn = [e](std::span<const double> x) { return e(x); };
    d.expression = text;
    return d;
  }

  RepresentationData descriptor(const json& doc) const {
    const Path root;
    if (!doc.is_object()) fail(root, "descriptor must be a JSON object");
    only_keys(doc, root, {"schema", "a", "b", "measure"});
    const json& schema = field(doc, root, "schema");
    if (!schema.is_string() || schema.get<std::string>() != kSchemaVersion) {
      fail(child(root, "schema"), "expected schema \"" + std::string(kSchemaVersion) + "\"");
    }
    RepresentationData data;
    data.a = finite(field(doc, root, "a"), child(root, "a"));
    const Path bp = child(root, "b");
    const json& bs = array(field(doc, root, "b"), bp);
    if (bs.empty()) fail(bp, "b needs at least one entry");
    for (std::size_t i = 0; i < bs.size(); ++i) {
      data.b.push_back(finite(bs[i], child(bp, i)));
      if (data.b.back() < 0.0) fail(child(bp, i), "b entries must be >= 0");
    }
    data.mu = measure(field(doc, root, "measure"), child(root, "measure"));
    if (data.mu.dimension() != data.b.size()) {
      fail(child(root, "measure"), "measure dimension " + std::to_string(data.mu.dimension()) +
                                       " does not match b (n = " + std::to_string(data.b.size()) + ")");
    }
    return data;
  }

 private:
  std::string_view text_;
};

json number_out(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json measure_out(const Measure& mu) {
  const auto& v = mu.node().v;
  json out;
  if (const auto* a = std::get_if<AtomicMeasure>(&v)) {
    out["type"] = "atomic";
    out["dimension"] = a->dimension;
    json atoms = json::array();
    for (const auto& atom : a->atoms) {
      json row = json::array();
      for (double x : atom.location) row.push_back(x);
      row.push_back(atom.weight);
      atoms.push_back(row);
    }
    out["atoms"] = atoms;
  } else if (const auto* l = std::get_if<LebesgueMeasure>(&v)) {
    out["type"] = "lebesgue";
    out["dimension"] = l->dimension;
    if (!l->density.unit) {
      if (l->density.expression.empty()) throw std::invalid_argument("descriptor: density has no expression to serialize");
      out["density"] = l->density.expression;
    }
    if (l->support) {
      json rows = json::array();
      for (const auto& iv : l->support->axes) rows.push_back(json::array({number_out(iv.lo), number_out(iv.hi)}));
      out["support"] = rows;
    }
  } else if (const auto* p = std::get_if<ProductMeasure>(&v)) {
    out["type"] = "product";
    json fs = json::array();
    for (const auto& f : p->factors) fs.push_back(measure_out(f));
    out["factors"] = fs;
  } else if (const auto* pf = std::get_if<Pushforward2DMeasure>(&v)) {
    out["type"] = "pushforward2d";
    out["base"] = measure_out(pf->base);
    out["alpha"] = pf->alpha;
    out["beta"] = pf->beta;
    out["gamma"] = pf->gamma;
    out["delta"] = pf->delta;
  } else if (const auto* lad = std::get_if<LadderMeasure>(&v)) {
    out["type"] = "ladder";
    out["base"] = measure_out(lad->base);
    out["b"] = lad->b;
    out["beta"] = lad->scale;
  } else {
    const auto& pad = std::get<PaddedMeasure>(v);
    out["type"] = "padded";
    out["dimension"] = pad.dimension;
    out["axes"] = pad.base_axes;
    out["base"] = measure_out(pad.base);
  }
  return out;
}

}  // namespace

RepresentationData parse_descriptor(std::string_view text) {
  Reader r(text);
  return r.descriptor(r.parse());
}

Measure parse_measure_document(std::string_view text) {
  Reader r(text);
  const json doc = r.parse();
  if (doc.is_object() && doc.contains("measure")) return r.descriptor(doc).mu;
  return r.measure(doc, {});
}

std::string write_descriptor(const RepresentationData& data, int indent) {
  data.validate();
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["a"] = data.a;
  doc["b"] = data.b;
  doc["measure"] = measure_out(data.mu);
  return doc.dump(indent);
}

}  // namespace nvk
