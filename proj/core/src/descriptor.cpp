#include "finsler/descriptor.hpp"

#include "finsler/catalog.hpp"
#include "finsler/error.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace finsler {

namespace {

void allow_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) throw SchemaError(where + ": unknown key '" + item.key() + "'");
  }
}

double number(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::string text(const Json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_string()) throw SchemaError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

void require_dim(int requested, int actual, const std::string& type) {
  if (requested != 0 && requested != actual) {
    throw SchemaError(type + " has dimension " + std::to_string(actual) + ", descriptor asks for " +
                      std::to_string(requested));
  }
}

Mat matrix_2x2(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw SchemaError("'A' must be a 2x2 array");
  Mat A(2, 2);
  for (int r = 0; r < 2; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || row.size() != 2) throw SchemaError("'A' must be a 2x2 array");
    for (int c = 0; c < 2; ++c) {
      const Json& v = row.at(static_cast<std::size_t>(c));
      if (!v.is_number()) throw SchemaError("'A' entries must be numbers");
      A(r, c) = v.get<double>();
    }
  }
  return A;
}

WaveProfile wave_profile(const Json& params) {
  if (!params.contains("H")) return WaveProfile{};
  const Json& h = params.at("H");
  if (h.is_string()) {
    try {
      return WaveProfile::named(h.get<std::string>());
    } catch (const DomainError& e) {
      throw SchemaError(e.what());
    }
  }
  if (h.is_object()) {
    allow_keys(h, {"A"}, "H");
    if (!h.contains("A")) throw SchemaError("'H' object needs 'A'");
    return WaveProfile::quadratic(matrix_2x2(h.at("A")));
  }
  throw SchemaError("'H' must be a profile name or {\"A\": [[..], [..]]}");
}

TransverseSign transverse_sign(const Json& params) {
  const std::string s = text(params, "transverse_sign", "negative");
  if (s == "negative") return TransverseSign::negative;
  if (s == "positive") return TransverseSign::positive;
  throw SchemaError("'transverse_sign' must be \"negative\" or \"positive\"");
}

RosenAxis rosen_axis(const Json& j) {
  try {
    if (j.is_string()) return RosenAxis::parse(j.get<std::string>());
    if (j.is_object()) {
      allow_keys(j, {"kind", "rate"}, "rosen axis");
      if (!j.contains("kind")) throw SchemaError("rosen axis needs 'kind'");
      return RosenAxis::parse(text(j, "kind", ""), number(j, "rate", 1.0));
    }
  } catch (const DomainError& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError("rosen axis must be a kind name or {\"kind\", \"rate\"}");
}

using Registry = std::map<std::string, LagrangianFactory>;

void add_builtins(Registry& r) {
  r["minkowski"] = [](const Json& p, int dim) {
    allow_keys(p, {}, "minkowski params");
    const int n = dim == 0 ? 4 : dim;
    if (n < 3) throw SchemaError("minkowski needs dim >= 3");
    return build_minkowski(n);
  };
  r["brinkmann"] = [](const Json& p, int dim) {
    allow_keys(p, {"H", "transverse_sign"}, "brinkmann params");
    require_dim(dim, 4, "brinkmann");
    return build_brinkmann_quadratic(wave_profile(p), transverse_sign(p));
  };
  r["parallel_example"] = [](const Json& p, int dim) {
    allow_keys(p, {"amplitude", "drift"}, "parallel_example params");
    require_dim(dim, 4, "parallel_example");
    return build_sample_parallel_example(number(p, "amplitude", 0.2), number(p, "drift", 0.3));
  };
  r["ppwave_example"] = [](const Json& p, int dim) {
    allow_keys(p, {"amplitude", "drift"}, "ppwave_example params");
    require_dim(dim, 4, "ppwave_example");
    return build_sample_ppwave_example(number(p, "amplitude", 0.3), number(p, "drift", 0.3));
  };
  r["rosen"] = [](const Json& p, int dim) {
    allow_keys(p, {"axes", "cross_amplitude"}, "rosen params");
    RosenFixture fx;
    if (p.contains("axes")) {
      const Json& axes = p.at("axes");
      if (!axes.is_array() || axes.empty()) throw SchemaError("'axes' must be a non-empty array");
      for (const Json& a : axes) fx.axes.push_back(rosen_axis(a));
    } else {
      fx.axes = {RosenAxis::parse("cos2"), RosenAxis::parse("flat")};
    }
    fx.cross_amplitude = number(p, "cross_amplitude", 0.0);
    require_dim(dim, fx.dim(), "rosen");
    return build_rosen(fx);
  };
  r["curved_screen"] = [](const Json& p, int dim) {
    allow_keys(p, {"curvature", "H"}, "curved_screen params");
    require_dim(dim, 4, "curved_screen");
    const double k = number(p, "curvature", 1.0);
    if (k < 0.0) throw SchemaError("'curvature' must be non-negative");
    return build_curved_screen(k, wave_profile(p));
  };
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

Registry& registry() {
  static Registry r = [] {
    Registry init;
    add_builtins(init);
    return init;
  }();
  return r;
}

Vec number_array(const Json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw SchemaError(std::string("'") + what + "' must be an array of " + std::to_string(n) + " numbers");
  }
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    const Json& e = j.at(static_cast<std::size_t>(i));
    if (!e.is_number()) throw SchemaError(std::string("'") + what + "' entries must be numbers");
    v(i) = e.get<double>();
  }
  return v;
}

Region region_from(const Json& j, int n) {
  if (j.is_number()) {
    const double w = j.get<double>();
    if (!(w > 0.0)) throw SchemaError("'region' half-width must be positive");
    return Region::cube(n, w);
  }
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw SchemaError("'region' must be a half-width or an array of " + std::to_string(n) + " [lo, hi] pairs");
  }
  Region r;
  for (const Json& b : j) {
    const Vec pair = number_array(b, 2, "region");
    if (!(pair(1) > pair(0))) throw SchemaError("'region' bounds need lo < hi");
    r.bounds.emplace_back(pair(0), pair(1));
  }
  return r;
}

}  // namespace

void register_lagrangian_type(const std::string& type, LagrangianFactory factory) {
  const std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[type] = std::move(factory);
}

std::vector<std::string> registered_types() {
  const std::lock_guard<std::mutex> lock(registry_mutex());
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

Lagrangian lagrangian_from_descriptor(const Json& d) {
  if (!d.is_object()) throw SchemaError("descriptor must be an object");
  allow_keys(d, {"name", "type", "dim", "params", "cone_ref", "region"}, "descriptor");
  if (!d.contains("type") || !d.at("type").is_string()) throw SchemaError("descriptor needs a string 'type'");
  const std::string type = d.at("type").get<std::string>();
  int dim = 0;
  if (d.contains("dim")) {
    if (!d.at("dim").is_number_integer() || d.at("dim").get<int>() < 3) {
      throw SchemaError("'dim' must be an integer >= 3");
    }
    dim = d.at("dim").get<int>();
  }
  const Json params = d.contains("params") ? d.at("params") : Json::object();
  if (!params.is_object()) throw SchemaError("'params' must be an object");

  LagrangianFactory factory;
  {
    const std::lock_guard<std::mutex> lock(registry_mutex());
    const auto it = registry().find(type);
    if (it == registry().end()) throw SchemaError("unknown Lagrangian type '" + type + "'");
    factory = it->second;
  }
  Lagrangian L = factory(params, dim);
  const int n = L.dim();
  if (d.contains("name")) {
    if (!d.at("name").is_string()) throw SchemaError("'name' must be a string");
    L = L.with_name(d.at("name").get<std::string>());
  }
  if (d.contains("region")) L = L.with_region(region_from(d.at("region"), n));
  if (d.contains("cone_ref")) {
    const Vec c = number_array(d.at("cone_ref"), n, "cone_ref");
    Vec center(n);
    for (int i = 0; i < n; ++i) {
      const auto& b = L.region().bounds[static_cast<std::size_t>(i)];
      center(i) = 0.5 * (b.first + b.second);
    }
    if (!(L(center, c) > 0.0)) throw ConstructionError("'cone_ref' is not inside the cone at the region center");
    L = L.with_cone_ref([c](const Vec&) { return c; });
  }
  return L;
}

}  // namespace finsler
