#include "pcm/scenario_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pcm {

using nlohmann::json;

namespace {

std::string format_coordinate(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

double parse_coordinate(const json& value) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw InvalidArgument("coordinate must be a decimal string or number");
  const std::string text = value.get<std::string>();
  double out = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InvalidArgument("malformed coordinate '" + text + "'");
  return out;
}

PointSet<double> parse_points(const json& list, Index dimension, const char* what) {
  if (!list.is_array()) throw InvalidArgument(std::string(what) + " must be an array");
  PointSet<double> points(static_cast<Index>(list.size()), dimension);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& row = list[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != dimension)
      throw DimensionMismatch(std::string(what) + " entry " + std::to_string(i) + " has the wrong dimension");
    for (Index c = 0; c < dimension; ++c) points(static_cast<Index>(i), c) = parse_coordinate(row[static_cast<std::size_t>(c)]);
  }
  return points;
}

json points_to_json(const PointSet<double>& points) {
  json list = json::array();
  for (Index i = 0; i < points.rows(); ++i) {
    json row = json::array();
    for (Index c = 0; c < points.cols(); ++c) row.push_back(format_coordinate(points(i, c)));
    list.push_back(std::move(row));
  }
  return list;
}

json point_to_json(const Point<double>& p) {
  json row = json::array();
  for (Index c = 0; c < p.size(); ++c) row.push_back(format_coordinate(p(c)));
  return row;
}

Point<double> parse_point(const json& row, Index dimension, const char* what) {
  if (!row.is_array() || static_cast<Index>(row.size()) != dimension)
    throw DimensionMismatch(std::string(what) + " has the wrong dimension");
  Point<double> p(dimension);
  for (Index c = 0; c < dimension; ++c) p(c) = parse_coordinate(row[static_cast<std::size_t>(c)]);
  return p;
}

// splitmix64: decorrelates per-attempt sub-seeds.
std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

bool GeneratorSpec::operator==(const GeneratorSpec& other) const {
  return n == other.n && r == other.r && dimension == other.dimension && lower == other.lower &&
         upper == other.upper && seed == other.seed && coverage_radius == other.coverage_radius;
}

bool ScenarioFile::operator==(const ScenarioFile& other) const {
  return dimension == other.dimension && explicit_scenario == other.explicit_scenario &&
         generator == other.generator;
}

ScenarioFile parse_scenario_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("scenario must be a JSON object");
  ScenarioFile file;
  file.dimension = doc.value("dimension", 2);
  if (file.dimension != 2 && file.dimension != 3) throw InvalidArgument("dimension must be 2 or 3");

  const bool has_coords = doc.contains("pois") || doc.contains("agents");
  const bool has_generator = doc.contains("generator");
  if (has_coords == has_generator) throw InvalidArgument("scenario needs explicit coordinates xor a generator block");

  if (has_coords) {
    if (!doc.contains("pois") || !doc.contains("agents")) throw InvalidArgument("explicit scenario needs pois and agents");
    Scenario s;
    s.pois = parse_points(doc["pois"], file.dimension, "pois");
    s.agents = parse_points(doc["agents"], file.dimension, "agents");
    file.explicit_scenario = std::move(s);
  } else {
    const json& g = doc["generator"];
    GeneratorSpec spec;
    spec.dimension = file.dimension;
    spec.n = g.at("n").get<Index>();
    spec.r = g.at("r").get<Index>();
    spec.seed = g.value("seed", std::uint64_t{0});
    spec.lower = Point<double>::Zero(file.dimension);
    spec.upper = Point<double>::Ones(file.dimension);
    if (g.contains("region")) {
      spec.lower = parse_point(g["region"].at("min"), file.dimension, "region.min");
      spec.upper = parse_point(g["region"].at("max"), file.dimension, "region.max");
    }
    if (g.contains("coverage_radius")) spec.coverage_radius = parse_coordinate(g["coverage_radius"]);
    file.generator = std::move(spec);
  }
  return file;
}

std::string scenario_to_json(const ScenarioFile& file) {
  json doc;
  doc["dimension"] = file.dimension;
  if (file.explicit_scenario) {
    doc["pois"] = points_to_json(file.explicit_scenario->pois);
    doc["agents"] = points_to_json(file.explicit_scenario->agents);
  }
  if (file.generator) {
    const GeneratorSpec& spec = *file.generator;
    json g;
    g["n"] = spec.n;
    g["r"] = spec.r;
    g["seed"] = spec.seed;
    g["region"] = {{"min", point_to_json(spec.lower)}, {"max", point_to_json(spec.upper)}};
    if (spec.coverage_radius) g["coverage_radius"] = format_coordinate(*spec.coverage_radius);
    doc["generator"] = std::move(g);
  }
  return doc.dump(2) + "\n";
}

ScenarioFile load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_json(buffer.str());
}

void save_scenario_file(const std::filesystem::path& path, const ScenarioFile& file) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write scenario file " + path.string());
  out << scenario_to_json(file);
}

GeneratorSpec parse_generate_flag(const std::string& flag, std::uint64_t default_seed) {
  GeneratorSpec spec;
  spec.seed = default_seed;
  std::istringstream in(flag);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("generator entry '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::uint64_t parsed = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw InvalidArgument("generator value '" + value + "' is not an unsigned integer");
    if (key == "n")
      spec.n = static_cast<Index>(parsed);
    else if (key == "r")
      spec.r = static_cast<Index>(parsed);
    else if (key == "seed")
      spec.seed = parsed;
    else if (key == "d")
      spec.dimension = static_cast<Index>(parsed);
    else
      throw InvalidArgument("unknown generator key '" + key + "'");
  }
  if (spec.dimension != 2 && spec.dimension != 3) throw InvalidArgument("dimension must be 2 or 3");
  spec.lower = Point<double>::Zero(spec.dimension);
  spec.upper = Point<double>::Ones(spec.dimension);
  return spec;
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

Scenario generate_scenario(const GeneratorSpec& spec, double rho) {
  if (spec.n < 1 || spec.r < 1) throw InvalidArgument("generator needs n >= 1 and r >= 1");
  if (spec.lower.size() != spec.dimension || spec.upper.size() != spec.dimension)
    throw DimensionMismatch("generator region has the wrong dimension");
  const double radius = spec.coverage_radius.value_or(rho);
  const Index d = spec.dimension;
  constexpr int max_attempts = 1000;
  constexpr long max_draws_per_poi = 100000;

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::uint64_t state = mix_seed(spec.seed ^ mix_seed(static_cast<std::uint64_t>(attempt)));
    auto next = [&]() {
      state = mix_seed(state);
      return unit_uniform(state);
    };
    auto draw = [&]() {
      Point<double> p(d);
      for (Index c = 0; c < d; ++c) p(c) = spec.lower(c) + (spec.upper(c) - spec.lower(c)) * next();
      return p;
    };

    Scenario s;
    s.agents.resize(spec.r, d);
    for (Index j = 0; j < spec.r; ++j) s.agents.row(j) = draw().transpose();
    s.pois.resize(spec.n, d);
    bool ok = true;
    for (Index i = 0; i < spec.n && ok; ++i) {
      long draws = 0;
      for (;; ++draws) {
        if (draws >= max_draws_per_poi) {
          ok = false;
          break;
        }
        const Point<double> p = draw();
        bool covered = false;
        for (Index j = 0; j < spec.r && !covered; ++j) covered = (s.agents.row(j).transpose() - p).norm() <= radius;
        if (covered) {
          s.pois.row(i) = p.transpose();
          break;
        }
      }
    }
    if (ok && validate_scenario(s, rho).empty() && validate_scenario(s, radius).empty()) return s;
  }
  throw Error("no valid scenario after " + std::to_string(max_attempts) + " generator attempts");
}

Scenario resolve_scenario(const ScenarioFile& file, double rho) {
  if (file.explicit_scenario) return *file.explicit_scenario;
  if (file.generator) return generate_scenario(*file.generator, rho);
  throw InvalidArgument("scenario file has neither coordinates nor a generator");
}

}  // namespace pcm
