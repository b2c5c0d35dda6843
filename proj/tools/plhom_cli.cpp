#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "plhom/error.hpp"
#include "plhom/groups.hpp"
#include "plhom/io.hpp"
#include "plhom/svg.hpp"
#include "plhom/towers.hpp"
#include "plhom/wreath.hpp"

namespace {

using namespace plhom;

// Exit codes: 0 success or any verdict, 2 parse error, 3 resource cap,
// 4 verification mismatch, 1 anything else.
constexpr int kExitParse = 2;
constexpr int kExitResource = 3;
constexpr int kExitVerify = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open \"" + path + "\"");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write \"" + path + "\"");
  out << bytes;
}

GroupSearchConfig parse_caps(const std::string& spec) {
  GroupSearchConfig caps;
  std::istringstream is(spec);
  std::string item;
  while (std::getline(is, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("caps: expected key=value, got \"" + item + "\"");
    std::string key = item.substr(0, eq);
    long value = std::stol(item.substr(eq + 1));
    if (key == "elements")
      caps.max_elements = static_cast<std::size_t>(value);
    else if (key == "commutators")
      caps.max_commutators_per_level = static_cast<std::size_t>(value);
    else if (key == "strict")
      caps.strict = value != 0;
    else
      throw ParseError("caps: unknown key \"" + key + "\"");
  }
  return caps;
}

struct Options {
  std::string input;
  long max_word_length = 4;
  std::optional<int> tower_height;
  int copies = 1;
  std::string caps;
  std::string svg_path;
  std::string format = "structured-text";
  std::string kind = "W";
  int index = 1;
  int n = 2;
  long theta_bound = 32;
};

int run(int argc, char** argv) {
  CLI::App app{"exact geometry of piecewise-linear homeomorphism groups of [0,1]"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool with_input = true) {
    if (with_input) cmd->add_option("input", opt.input, "input file")->required();
    cmd->add_option("--max-word-length,-L", opt.max_word_length, "word length search bound");
    cmd->add_option("--caps", opt.caps, "search caps: elements=N,commutators=N,strict=0|1");
    cmd->add_option("--format", opt.format, "structured-text | report-markup")
        ->check(CLI::IsMember({"structured-text", "report-markup"}));
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "full pipeline: orbitals, witnesses, depth, verdict");
  add_common(analyze_cmd);
  analyze_cmd->add_option("--tower-height,-k", opt.tower_height, "push certified towers to this height");

  auto* orbitals_cmd = app.add_subcommand("orbitals", "group and generator orbitals");
  add_common(orbitals_cmd);

  auto* tower_cmd = app.add_subcommand("tower", "certified depth lower bound with tower certificate");
  add_common(tower_cmd);
  tower_cmd->add_option("--tower-height,-k", opt.tower_height, "push certified towers to this height");

  auto* derive_cmd = app.add_subcommand("derive-tower", "one derivation step on a tower certificate");
  derive_cmd->add_option("input", opt.input, "certificate file")->required();

  auto* wreath_cmd = app.add_subcommand("build-wreath", "emit an iterated wreath family as a group file");
  wreath_cmd->add_option("--kind", opt.kind, "W | G")->check(CLI::IsMember({"W", "G"}));
  wreath_cmd->add_option("--index", opt.index, "family index i >= 1")->required();
  wreath_cmd->add_option("--copies", opt.copies, "truncation for direct sums");

  auto* fgroup_cmd = app.add_subcommand("f-group", "emit Thompson group generators as a group file");
  fgroup_cmd->add_option("--n", opt.n, "family parameter n >= 2")->required();

  auto* obstruction_cmd = app.add_subcommand("obstruction", "run the wreath obstruction improvement loop");
  obstruction_cmd->add_option("input", opt.input, "file with alpha, beta, gamma")->required();
  obstruction_cmd->add_option("--theta-bound", opt.theta_bound, "exponent bound for theta searches");

  auto* verify_cmd = app.add_subcommand("verify", "replay a tower certificate");
  verify_cmd->add_option("input", opt.input, "certificate file")->required();

  auto* plot_cmd = app.add_subcommand("plot", "deterministic SVG of a map, group, or tower");
  plot_cmd->add_option("input", opt.input, "map, group, or certificate file")->required();
  plot_cmd->add_option("--svg", opt.svg_path, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*analyze_cmd) {
    GroupSpec G = io::parse_group(slurp(opt.input));
    AnalyzeConfig cfg;
    cfg.L = opt.max_word_length;
    cfg.k_target = opt.tower_height;
    if (!opt.caps.empty()) cfg.caps = parse_caps(opt.caps);
    AnalysisReport r = analyze(G, cfg);
    std::cout << (opt.format == "report-markup" ? io::report_markup(r, G) : io::serialize_report(r, G));
    return 0;
  }
  if (*orbitals_cmd) {
    GroupSpec G = io::parse_group(slurp(opt.input));
    std::cout << io::serialize_orbitals(G);
    return 0;
  }
  if (*tower_cmd) {
    GroupSpec G = io::parse_group(slurp(opt.input));
    GroupSearchConfig caps;
    if (!opt.caps.empty()) caps = parse_caps(opt.caps);
    auto depth = depth_lower_bound(G, opt.max_word_length, opt.tower_height, caps);
    std::cerr << "depth lower bound: " << depth.n << "\n";
    std::cout << io::serialize(depth.certificate);
    return 0;
  }
  if (*derive_cmd) {
    TowerCertificate cert = io::parse_certificate(slurp(opt.input));
    replay_certificate(cert);
    auto derived = derive_tower(cert.group, cert.tower);
    std::cout << io::serialize(derived);
    return 0;
  }
  if (*wreath_cmd) {
    FamilyKind kind = opt.kind == "W" ? FamilyKind::W : FamilyKind::G;
    std::cout << io::serialize(build_family(kind, opt.index, opt.copies));
    return 0;
  }
  if (*fgroup_cmd) {
    std::cout << io::serialize(f_generators(opt.n));
    return 0;
  }
  if (*obstruction_cmd) {
    auto in = io::parse_obstruction_input(slurp(opt.input));
    in.bounds.theta_exponent_bound = opt.theta_bound;
    try {
      auto res = obstruction_demo(in.alpha, in.beta, in.gamma, in.bounds);
      std::cout << io::serialize_obstruction_log(res.log, &res.gamma_final);
      return 0;
    } catch (const ObstructionDegenerateError& e) {
      std::cout << io::serialize_obstruction_log(e.log, nullptr);
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    } catch (const ObstructionInconclusiveError& e) {
      std::cout << io::serialize_obstruction_log(e.log, nullptr);
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  if (*verify_cmd) {
    TowerCertificate cert = io::parse_certificate(slurp(opt.input));
    replay_certificate(cert);
    std::cout << "verified: " << cert.tower.height() << " level(s)"
              << (cert.exemplary_claimed ? ", exemplary" : "") << "\n";
    return 0;
  }
  if (*plot_cmd) {
    std::string text = slurp(opt.input);
    std::string svg;
    switch (io::detect_kind(text)) {
      case io::FileKind::PLMapFile:
        svg = svg::plot(io::parse_plmap(text));
        break;
      case io::FileKind::GroupFile:
        svg = svg::plot(io::parse_group(text));
        break;
      case io::FileKind::CertificateFile:
        svg = svg::plot(io::parse_certificate(text).tower);
        break;
      default:
        throw ParseError("plot: input is not a map, group, or certificate");
    }
    spill(opt.svg_path, svg);
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const plhom::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const plhom::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const plhom::VerifyError& e) {
    std::cerr << "verification mismatch";
    if (e.step >= 0) std::cerr << " at step " << e.step;
    std::cerr << ": " << e.what() << "\n";
    return kExitVerify;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
