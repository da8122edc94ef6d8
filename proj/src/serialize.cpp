#include "rightangle/serialize.hpp"

#include <fstream>
#include <limits>

#include "rightangle/error.hpp"

namespace rightangle::serialize {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const Json& field_of(const Json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key \"") + key + "\"");
  return *it;
}

std::uint64_t as_uint(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    fail(std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

const Json& as_array(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  return j;
}

Json big_to_json(const geometry::BigInt& v) {
  if (v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(v);
  return v.str();
}

template <typename F>
auto guarded(F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    fail(e.what());
  }
}

std::string axis_name(rank::Axis a) {
  switch (a) {
    case rank::Axis::X: return "X";
    case rank::Axis::Y: return "Y";
    case rank::Axis::Z: return "Z";
  }
  return "X";
}

std::vector<gf::FieldElement> elements_from_json(const gf::FieldSpec& f, const Json& j, std::size_t expected,
                                                 const char* what) {
  as_array(j, what);
  if (j.size() != expected) {
    fail(std::string(what) + " has " + std::to_string(j.size()) + " entries, expected " + std::to_string(expected));
  }
  std::vector<gf::FieldElement> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(element_from_json(f, e));
  return out;
}

Json elements_to_json(const gf::FieldSpec& f, const std::vector<gf::FieldElement>& v) {
  Json out = Json::array();
  for (auto e : v) out.push_back(to_json(f, e));
  return out;
}

}  // namespace

Json to_json(const gf::FieldSpec& f) { return Json{{"p", f.p()}, {"k", f.k()}, {"modulus", f.modulus()}}; }

gf::FieldSpec field_from_json(const Json& j) {
  return guarded([&] {
    const auto p = as_uint(field_of(j, "p"), "p");
    const auto k = as_uint(field_of(j, "k"), "k");
    std::vector<gf::Coeff> modulus;
    for (const auto& c : as_array(field_of(j, "modulus"), "modulus")) {
      const auto v = as_uint(c, "modulus coefficient");
      if (v > std::numeric_limits<gf::Coeff>::max()) fail("modulus coefficient too large");
      modulus.push_back(static_cast<gf::Coeff>(v));
    }
    if (p > std::numeric_limits<std::uint32_t>::max() || k > 64) fail("field parameters too large");
    return gf::FieldSpec::make(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(k), std::move(modulus));
  });
}

Json to_json(const gf::FieldSpec& f, gf::FieldElement e) {
  if (f.k() == 1) return e.code();
  return f.coeffs(e);
}

gf::FieldElement element_from_json(const gf::FieldSpec& f, const Json& j) {
  return guarded([&] {
    if (f.k() == 1) {
      const auto v = as_uint(j, "field element");
      if (v >= f.p()) fail("field element " + std::to_string(v) + " out of range");
      return gf::FieldElement(static_cast<std::uint32_t>(v));
    }
    as_array(j, "field element");
    if (j.size() != f.k()) fail("field element needs " + std::to_string(f.k()) + " coefficients");
    std::vector<gf::Coeff> c;
    for (const auto& x : j) {
      const auto v = as_uint(x, "coefficient");
      if (v >= f.p()) fail("coefficient " + std::to_string(v) + " out of range");
      c.push_back(static_cast<gf::Coeff>(v));
    }
    return f.from_coeffs(c);
  });
}

Json to_json(const gf::FieldSpec& f, const gf::Point& p) { return elements_to_json(f, p.coords); }

gf::Point point_from_json(const gf::FieldSpec& f, const Json& j) {
  as_array(j, "point");
  gf::Point p;
  for (const auto& e : j) p.coords.push_back(element_from_json(f, e));
  return p;
}

Json to_json(const geometry::PointSet& a) {
  Json pts = Json::array();
  for (const auto& p : a.points()) pts.push_back(to_json(a.field(), p));
  return Json{{"field", to_json(a.field())}, {"n", a.n()}, {"points", std::move(pts)}};
}

geometry::PointSet point_set_from_json(const Json& j) {
  return guarded([&] {
    auto f = field_from_json(field_of(j, "field"));
    const auto n = as_uint(field_of(j, "n"), "n");
    std::vector<gf::Point> pts;
    for (const auto& p : as_array(field_of(j, "points"), "points")) pts.push_back(point_from_json(f, p));
    return geometry::PointSet(std::move(f), n, std::move(pts));
  });
}

Json to_json(const geometry::PointSet& a, const geometry::TripleWitness& w) {
  const auto& f = a.field();
  return Json{{"vertex", w.vertex},
              {"arm1", w.arm1},
              {"arm2", w.arm2},
              {"value", to_json(f, w.value)},
              {"points",
               {{"vertex", to_json(f, a[w.vertex])}, {"arm1", to_json(f, a[w.arm1])}, {"arm2", to_json(f, a[w.arm2])}}}};
}

Json to_json(const geometry::BoundsReport& r) {
  Json out{{"n", r.n}, {"q", r.q}};
  out["lower_construction"] = r.lower ? big_to_json(*r.lower) : Json(nullptr);
  out["upper_theorem5"] = r.upper ? big_to_json(*r.upper) : Json(nullptr);
  out["exact"] = r.exact ? Json(*r.exact) : Json(nullptr);
  out["status"] = !r.exact ? "unknown" : r.status == geometry::ValueStatus::Exact ? "exact" : "lower_bound";
  return out;
}

Json to_json(const rank::MatrixFq& m) {
  return Json{{"field", to_json(m.field())},
              {"rows", m.rows()},
              {"cols", m.cols()},
              {"values", elements_to_json(m.field(), m.entries())}};
}

rank::MatrixFq matrix_from_json(const Json& j) {
  return guarded([&] {
    auto f = field_from_json(field_of(j, "field"));
    const auto rows = as_uint(field_of(j, "rows"), "rows");
    const auto cols = as_uint(field_of(j, "cols"), "cols");
    const auto vals = elements_from_json(f, field_of(j, "values"), rows * cols, "values");
    rank::MatrixFq m(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = vals[r * cols + c];
    }
    return m;
  });
}

Json to_json(const rank::Tensor3& t) {
  return Json{{"index_set", to_json(t.index_set())}, {"m", t.m()}, {"values", elements_to_json(t.field(), t.values())}};
}

rank::Tensor3 tensor_from_json(const Json& j) {
  return guarded([&] {
    rank::Tensor3 t(point_set_from_json(field_of(j, "index_set")));
    const std::size_t m = t.m();
    if (as_uint(field_of(j, "m"), "m") != m) fail("m does not match the index set");
    const auto vals = elements_from_json(t.field(), field_of(j, "values"), m * m * m, "values");
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = 0; y < m; ++y) {
        for (std::size_t z = 0; z < m; ++z) t.at(x, y, z) = vals[(x * m + y) * m + z];
      }
    }
    return t;
  });
}

Json to_json(const rank::SliceDecomposition& d) {
  const auto& f = d.field;
  const std::size_t m = d.target_size;
  Json slices = Json::array();
  for (const auto& s : d.slices) {
    Json bi = Json::array();
    for (std::size_t r = 0; r < m; ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < m; ++c) row.push_back(to_json(f, s.bi[r * m + c]));
      bi.push_back(std::move(row));
    }
    slices.push_back(Json{{"axis", axis_name(s.axis)}, {"uni", elements_to_json(f, s.uni)}, {"bi", std::move(bi)}});
  }
  return Json{{"field", to_json(f)}, {"target_size", m}, {"slices", std::move(slices)}};
}

rank::SliceDecomposition decomposition_from_json(const Json& j) {
  return guarded([&] {
    auto f = field_from_json(field_of(j, "field"));
    const auto m = as_uint(field_of(j, "target_size"), "target_size");
    rank::SliceDecomposition d{f, m, {}, 0, 0};
    for (const auto& js : as_array(field_of(j, "slices"), "slices")) {
      rank::Slice s;
      const auto& axis = field_of(js, "axis");
      if (axis == "X") {
        s.axis = rank::Axis::X;
      } else if (axis == "Y") {
        s.axis = rank::Axis::Y;
      } else if (axis == "Z") {
        s.axis = rank::Axis::Z;
      } else {
        fail("axis must be \"X\", \"Y\" or \"Z\"");
      }
      s.uni = elements_from_json(f, field_of(js, "uni"), m, "uni");
      const auto& bi = as_array(field_of(js, "bi"), "bi");
      if (bi.size() != m) fail("bi must have target_size rows");
      for (const auto& row : bi) {
        auto vals = elements_from_json(f, row, m, "bi row");
        s.bi.insert(s.bi.end(), vals.begin(), vals.end());
      }
      d.slices.push_back(std::move(s));
    }
    return d;
  });
}

Json to_json(const search::Checkpoint& c) {
  return Json{{"version", c.version},
              {"n", c.n},
              {"q", c.q},
              {"orbit_reduction", c.orbit_reduction},
              {"completed_branches", c.completed_branches},
              {"best_indices", c.best_indices},
              {"nodes", c.nodes}};
}

search::Checkpoint checkpoint_from_json(const Json& j) {
  return guarded([&] {
    search::Checkpoint c;
    c.version = static_cast<int>(as_uint(field_of(j, "version"), "version"));
    if (c.version != search::Checkpoint::kVersion) fail("unsupported checkpoint version " + std::to_string(c.version));
    c.n = as_uint(field_of(j, "n"), "n");
    c.q = static_cast<std::uint32_t>(as_uint(field_of(j, "q"), "q"));
    c.orbit_reduction = field_of(j, "orbit_reduction").get<bool>();
    for (const auto& b : as_array(field_of(j, "completed_branches"), "completed_branches")) {
      c.completed_branches.push_back(as_uint(b, "branch"));
    }
    for (const auto& b : as_array(field_of(j, "best_indices"), "best_indices")) {
      c.best_indices.push_back(as_uint(b, "index"));
    }
    c.nodes = as_uint(field_of(j, "nodes"), "nodes");
    return c;
  });
}

Json to_json(const search::SearchResult& r) {
  const auto& cfg = r.config;
  Json config{{"method", cfg.method},
              {"threads", cfg.budget.threads},
              {"max_nodes", cfg.budget.max_nodes ? Json(*cfg.budget.max_nodes) : Json(nullptr)},
              {"max_seconds", cfg.budget.max_seconds ? Json(*cfg.budget.max_seconds) : Json(nullptr)},
              {"exhaustive", cfg.budget.exhaustive},
              {"orbit_reduction", cfg.orbit_reduction},
              {"seed", cfg.seed ? Json(*cfg.seed) : Json(nullptr)},
              {"restarts", cfg.restarts}};
  Json out{{"n", r.n},
           {"q", r.q},
           {"size", r.size},
           {"status", r.status == search::Status::Exact ? "exact" : "lower_bound"},
           {"nodes", r.nodes},
           {"elapsed", r.elapsed},
           {"config", std::move(config)},
           {"best", to_json(r.best)}};
  if (r.checkpoint) out["checkpoint"] = to_json(*r.checkpoint);
  return out;
}

search::SearchResult search_result_from_json(const Json& j) {
  return guarded([&] {
    auto best = point_set_from_json(field_of(j, "best"));
    const auto& status = field_of(j, "status");
    if (status != "exact" && status != "lower_bound") fail("status must be \"exact\" or \"lower_bound\"");
    const auto& cj = field_of(j, "config");
    search::SearchConfig cfg;
    cfg.method = field_of(cj, "method").get<std::string>();
    cfg.budget.threads = static_cast<unsigned>(as_uint(field_of(cj, "threads"), "threads"));
    if (const auto& v = field_of(cj, "max_nodes"); !v.is_null()) cfg.budget.max_nodes = as_uint(v, "max_nodes");
    if (const auto& v = field_of(cj, "max_seconds"); !v.is_null()) cfg.budget.max_seconds = v.get<double>();
    cfg.budget.exhaustive = field_of(cj, "exhaustive").get<bool>();
    cfg.orbit_reduction = field_of(cj, "orbit_reduction").get<bool>();
    if (const auto& v = field_of(cj, "seed"); !v.is_null()) cfg.seed = as_uint(v, "seed");
    cfg.restarts = static_cast<unsigned>(as_uint(field_of(cj, "restarts"), "restarts"));

    const auto size = as_uint(field_of(j, "size"), "size");
    if (size != best.size()) fail("size does not match the best set");
    const auto n = as_uint(field_of(j, "n"), "n");
    const auto q = as_uint(field_of(j, "q"), "q");
    if (n != best.n() || q != best.field().q()) fail("n or q does not match the best set");
    std::optional<search::Checkpoint> cp;
    if (j.contains("checkpoint")) cp = checkpoint_from_json(j["checkpoint"]);
    return search::SearchResult{n,
                                static_cast<std::uint32_t>(q),
                                std::move(best),
                                size,
                                status == "exact" ? search::Status::Exact : search::Status::LowerBound,
                                as_uint(field_of(j, "nodes"), "nodes"),
                                field_of(j, "elapsed").get<double>(),
                                std::move(cfg),
                                std::move(cp)};
  });
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(path + ": " + e.what());
  }
}

}  // namespace rightangle::serialize
