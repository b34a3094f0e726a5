#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "schroflow/angular.hpp"

namespace schroflow::cli {

void Provenance::note_default(const std::string& key, const json& value) { defaults.emplace_back(key, value.dump()); }

void Provenance::note_truncation(const std::string& key, const json& value) {
  truncations.emplace_back(key, value.dump());
}

std::string Provenance::header() const {
  std::ostringstream os;
  os << "# schroflow " << SCHROFLOW_VERSION << "\n";
  os << "# command: " << command << "\n";
  os << "# config_hash: " << config_hash << "\n";
  os << "# defaults:";
  if (defaults.empty()) os << " none";
  for (const auto& [k, v] : defaults) os << " " << k << "=" << v;
  os << "\n# truncations:";
  if (truncations.empty()) os << " none";
  for (const auto& [k, v] : truncations) os << " " << k << "=" << v;
  os << "\n";
  return os.str();
}

json Provenance::as_json() const {
  json d = json::object();
  for (const auto& [k, v] : defaults) d[k] = json::parse(v);
  json t = json::object();
  for (const auto& [k, v] : truncations) t[k] = json::parse(v);
  return {{"library_version", SCHROFLOW_VERSION}, {"command", command}, {"config_hash", config_hash},
          {"defaults", d}, {"truncations", t}};
}

Block::Block(const json* node, std::string path, Provenance* prov) : node_(node), path_(std::move(path)), prov_(prov) {
  if (node_ != nullptr && !node_->is_object()) throw ConfigError("'" + path_ + "' must be a JSON object");
}

bool Block::has(const std::string& key) const { return node_ != nullptr && node_->contains(key); }

const json& Block::raw(const std::string& key) {
  if (!has(key)) throw ConfigError("missing required key '" + qualified(key) + "'");
  used_.insert(key);
  return (*node_)[key];
}

Block Block::child(const std::string& key) {
  if (!has(key)) return Block(nullptr, qualified(key), prov_);
  used_.insert(key);
  return Block(&(*node_)[key], qualified(key), prov_);
}

void Block::finish() const {
  if (node_ == nullptr) return;
  for (const auto& [k, v] : node_->items()) {
    if (!used_.count(k)) throw ConfigError("unknown key '" + qualified(k) + "'");
  }
}

std::string config_hash(const json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

angular::CircleFourier read_fourier(Block& b) {
  if (b.has("fourier")) {
    std::vector<angular::cplx> c;
    for (const auto& e : b.raw("fourier")) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("'" + b.qualified("fourier") + "' entries must be [re, im]");
      c.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    b.finish();
    return angular::CircleFourier(std::move(c));
  }
  if (b.has("samples")) {
    const auto s = b.require<std::vector<double>>("samples");
    const int band = b.require<int>("band");
    b.finish();
    return angular::CircleFourier::from_samples(s, band);
  }
  throw ConfigError("Fourier coefficient block needs 'fourier' or 'samples'");
}

}  // namespace

Problem read_problem(Block& block, int min_modes) {
  Problem p;
  p.dimension = block.get<int>("dimension", 3);
  const int N = p.dimension;
  if (N < 2) throw ConfigError("problem.dimension must be >= 2");

  angular::AngularProblem ap;
  ap.dimension = N;
  bool constant = true;
  double a_const = 0.0;
  if (!block.has("a")) {
    block.get<double>("a", 0.0);
  } else if (block.raw("a").is_number()) {
    a_const = block.raw("a").get<double>();
  } else {
    constant = false;
    Block ab = block.child("a");
    if (N == 2) {
      ap.scalar = read_fourier(ab);
    } else if (N == 3 && ab.has("zonal")) {
      const auto c = ab.require<std::vector<double>>("zonal");
      ab.finish();
      ap.scalar = angular::SphereFunction([c](double theta, double) {
        double s = 0.0, x = std::cos(theta);
        for (std::size_t n = c.size(); n-- > 0;) s = s * x + c[n];
        return s;
      });
    } else {
      throw ConfigError("problem.a: use a number, {fourier|samples} for N = 2 or {zonal} for N = 3");
    }
  }
  if (constant) ap.scalar = angular::ConstantCoefficient{a_const};

  if (block.has("magnetic")) {
    if (N != 2) throw ConfigError("problem.magnetic is only supported for N = 2");
    if (block.raw("magnetic").is_number()) {
      ap.magnetic = angular::CircleFourier::constant(block.raw("magnetic").get<double>());
    } else {
      Block mb = block.child("magnetic");
      ap.magnetic = read_fourier(mb);
    }
  }

  const bool analytic = constant && !ap.magnetic && N >= 3;
  int modes = block.get<int>("modes", 16);
  if (modes < 1) throw ConfigError("problem.modes must be >= 1");
  angular::AngularEigensystem sys;
  if (analytic) {
    modes = std::max(modes, min_modes);
    sys = angular::constant_a_spectrum(N, a_const, modes);
    p.constant_a = a_const;
    p.description = "analytic constant-a spectrum";
  } else {
    ap.truncation = block.get<int>("truncation", N == 2 ? 32 : 12);
    if (block.has("sphere_nodes")) {
      const auto nodes = block.require<std::vector<int>>("sphere_nodes");
      if (nodes.size() != 2) throw ConfigError("problem.sphere_nodes must be [theta_nodes, phi_nodes]");
      ap.sphere_theta_nodes = nodes[0];
      ap.sphere_phi_nodes = nodes[1];
    }
    sys = angular::solve(ap);
    if (constant && !ap.magnetic) p.constant_a = a_const;
    p.description = std::string("Galerkin ") + std::string(angular::to_string(sys.basis));
    if (modes > static_cast<int>(sys.size())) throw ConfigError("problem.modes exceeds the Galerkin basis size");
  }
  block.finish();
  p.table = std::make_shared<const oscillator::SpectralTable>(oscillator::build_table(sys, N, modes));
  return p;
}

void require_hardy(const Problem& p) {
  if (!p.table->hardy_ok) {
    throw HardyViolation("Hardy condition violated: mu_1 = " + fmt(p.table->mu(1)) +
                         " <= -((N-2)/2)^2; the flow and its oscillator basis are not defined");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::filesystem::path target(const RunContext& ctx, const std::string& name) {
  std::filesystem::create_directories(ctx.out_dir);
  return ctx.out_dir / name;
}

}  // namespace

void write_csv(const RunContext& ctx, const std::string& name, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& comments) {
  std::ofstream f(target(ctx, name), std::ios::binary);
  if (!f) throw ConfigError("cannot write " + name);
  f << ctx.prov.header();
  for (const auto& c : comments) f << "# " << c << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) f << (i ? "," : "") << columns[i];
  f << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
    f << "\n";
  }
}

void write_json(const RunContext& ctx, const std::string& name, const json& payload) {
  json doc = payload;
  doc["schema_version"] = 1;
  doc["provenance"] = ctx.prov.as_json();
  std::ofstream f(target(ctx, name), std::ios::binary);
  if (!f) throw ConfigError("cannot write " + name);
  f << doc.dump(2) << "\n";
}

std::optional<double> expected_value(const json& expect, const std::string& key, double theory) {
  if (!expect.contains(key)) return std::nullopt;
  const auto& v = expect.at(key);
  if (v.is_string() && v.get<std::string>() == "theory") return theory;
  if (v.is_number()) return v.get<double>();
  throw ConfigError("expectation '" + key + "' must be a number or \"theory\"");
}

}  // namespace schroflow::cli
