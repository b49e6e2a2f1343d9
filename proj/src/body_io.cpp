#include "sinebody/body_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace sinebody {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* field) {
  if (!j.contains(field)) throw DescriptorError(field, "missing");
  return j.at(field);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw DescriptorError(field, "expected a number");
  return j.get<double>();
}

Vec vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw DescriptorError(field, "expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

Vec unit(const json& j, const std::string& field) {
  Vec v = vector(j, field);
  const double r = v.norm();
  if (!(r > 0.0) || !std::isfinite(r)) throw DescriptorError(field, "zero or non-finite vector");
  return v / r;
}

int dimension(const json& j) {
  const json& d = require(j, "dim");
  if (!d.is_number_integer()) throw DescriptorError("dim", "expected an integer");
  return d.get<int>();
}

void check_dim(const json& j, Eigen::Index size, const char* field) {
  if (j.contains("dim") && dimension(j) != size) {
    throw DescriptorError(field, "length " + std::to_string(size) + " does not match dim " +
                                     std::to_string(dimension(j)));
  }
}

BodyDescriptor from_json(const json& j) {
  if (!j.is_object()) throw DescriptorError("<root>", "expected a JSON object");
  const json& kind_field = require(j, "kind");
  if (!kind_field.is_string()) throw DescriptorError("kind", "expected a string");
  const std::string kind = kind_field.get<std::string>();
  BodyDescriptor d;
  if (kind == "ball") {
    d = BallSpec{dimension(j), number(require(j, "radius"), "radius")};
  } else if (kind == "ellipsoid") {
    EllipsoidSpec e{vector(require(j, "semiaxes"), "semiaxes")};
    check_dim(j, e.semiaxes.size(), "semiaxes");
    d = e;
  } else if (kind == "box") {
    BoxSpec b{vector(require(j, "half_widths"), "half_widths")};
    check_dim(j, b.half_widths.size(), "half_widths");
    d = b;
  } else if (kind == "cylinders") {
    CylinderSetSpec c{dimension(j), {}};
    const json& list = require(j, "cylinders");
    if (!list.is_array()) throw DescriptorError("cylinders", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string field = "cylinders[" + std::to_string(i) + "]";
      if (!list[i].is_object()) throw DescriptorError(field, "expected an object");
      if (!list[i].contains("axis")) throw DescriptorError(field + ".axis", "missing");
      if (!list[i].contains("radius")) throw DescriptorError(field + ".radius", "missing");
      c.cylinders.push_back({unit(list[i]["axis"], field + ".axis"),
                             number(list[i]["radius"], field + ".radius")});
    }
    d = c;
  } else if (kind == "radial_table") {
    const json& nodes = require(j, "nodes");
    if (!nodes.is_array() || nodes.empty()) throw DescriptorError("nodes", "expected a non-empty array");
    const int n = dimension(j);
    RadialTableSpec t;
    t.nodes.resize(n, static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::string field = "nodes[" + std::to_string(i) + "]";
      const Vec u = unit(nodes[i], field);
      if (u.size() != n) throw DescriptorError(field, "wrong length");
      t.nodes.col(static_cast<Eigen::Index>(i)) = u;
    }
    t.values = vector(require(j, "values"), "values");
    d = t;
  } else {
    throw DescriptorError("kind", "unknown kind '" + kind + "'");
  }
  validate(d);
  return d;
}

}  // namespace

BodyDescriptor parse_body_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t end = std::min(e.byte, text.size());
    for (std::size_t i = 0; i < end; ++i) line += text[i] == '\n';
    throw DescriptorError("line " + std::to_string(line), e.what());
  }
  return from_json(j);
}

BodyDescriptor load_body_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open body file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_body_json(buffer.str());
}

std::string body_to_json(const BodyDescriptor& descriptor) {
  auto array = [](const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  json j;
  j["dim"] = descriptor_dim(descriptor);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BallSpec>) {
          j["kind"] = "ball";
          j["radius"] = d.radius;
        } else if constexpr (std::is_same_v<T, EllipsoidSpec>) {
          j["kind"] = "ellipsoid";
          j["semiaxes"] = array(d.semiaxes);
        } else if constexpr (std::is_same_v<T, BoxSpec>) {
          j["kind"] = "box";
          j["half_widths"] = array(d.half_widths);
        } else if constexpr (std::is_same_v<T, CylinderSetSpec>) {
          j["kind"] = "cylinders";
          j["cylinders"] = json::array();
          for (const auto& c : d.cylinders) {
            j["cylinders"].push_back({{"axis", array(c.axis)}, {"radius", c.radius}});
          }
        } else {
          j["kind"] = "radial_table";
          j["nodes"] = json::array();
          for (Eigen::Index i = 0; i < d.nodes.cols(); ++i) j["nodes"].push_back(array(d.nodes.col(i)));
          j["values"] = array(d.values);
        }
      },
      descriptor);
  return j.dump(2);
}

}  // namespace sinebody
