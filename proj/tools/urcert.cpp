#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rigidity/attach.hpp"
#include "rigidity/core.hpp"
#include "rigidity/generate.hpp"
#include "rigidity/io.hpp"
#include "rigidity/stress.hpp"
#include "rigidity/svg.hpp"

namespace {

using namespace rigidity;

// exit codes: 0 success/certified, 1 domain failure, 2 input/parse failure

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, sep)) parts.push_back(token);
  return parts;
}

int parse_cli_label(const std::string& token) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(token, &used);
    if (used != token.size() || value < 1) throw ParseError("");
    return value;
  } catch (...) {
    throw ParseError("bad vertex label '" + token + "' (labels are 1-based)");
  }
}

// "1:1,2:3" -> 0-based (A,B) correspondence pairs
std::vector<std::pair<int, int>> parse_share(const std::string& text) {
  std::vector<std::pair<int, int>> pairs;
  for (const std::string& item : split(text, ',')) {
    const auto sides = split(item, ':');
    if (sides.size() != 2) throw ParseError("bad share pair '" + item + "'; expected a:b");
    pairs.emplace_back(parse_cli_label(sides[0]) - 1, parse_cli_label(sides[1]) - 1);
  }
  if (pairs.empty()) throw ParseError("--share lists no pairs");
  return pairs;
}

// "1-2,3-4" -> 0-based edges
std::vector<Edge> parse_edge_list(const std::string& text) {
  std::vector<Edge> edges;
  for (const std::string& item : split(text, ',')) {
    const auto ends = split(item, '-');
    if (ends.size() != 2) throw ParseError("bad edge '" + item + "'; expected i-j");
    edges.push_back(make_edge(parse_cli_label(ends[0]) - 1, parse_cli_label(ends[1]) - 1));
  }
  return edges;
}

void print_certificate(const Certificate& cert) {
  std::cout << "verdict: " << (cert.certified() ? "certified" : "not certified") << "\n";
  if (cert.eigenvalues.size() > 0) {
    std::cout << std::setprecision(12) << "eigenvalues: min " << cert.eigenvalues.minCoeff()
              << ", max " << cert.eigenvalues.maxCoeff() << "\n";
  }
  std::cout << "nullity: " << cert.nullity << "\n";
  std::cout << "tolerances: zero-rel " << cert.tolerances.zero_rel << ", geom-abs "
            << cert.tolerances.geom_abs << "\n";
  for (const std::string& reason : cert.reasons) {
    std::cout << "failed: " << reason << "\n";
  }
}

int cmd_certify(const std::string& input, const Tolerances& tol) {
  const FrameworkDocument doc = load_document(input);
  if (!doc.stress) throw ParseError("document '" + input + "' has no stress block");
  const Certificate cert = certify_universal_rigidity(doc.framework, *doc.stress, tol);
  print_certificate(cert);
  return cert.certified() ? 0 : 1;
}

int cmd_attach(const std::string& a_path, const std::string& b_path,
               const std::string& share, const std::string& reduce,
               const std::string& out, const Tolerances& tol) {
  const FrameworkDocument doc_a = load_document(a_path);
  const FrameworkDocument doc_b = load_document(b_path);
  if (!doc_a.stress) throw ParseError("document '" + a_path + "' has no stress block");
  if (!doc_b.stress) throw ParseError("document '" + b_path + "' has no stress block");

  const AttachmentSpec spec(parse_share(share));
  const Attachment att = attach(doc_a.framework, doc_b.framework, spec, tol);
  EdgeReduction reduction;
  if (!reduce.empty()) reduction.removed_edges = parse_edge_list(reduce);

  EdgeReducedResult result =
      edge_reduced_stress(att, *doc_a.stress, *doc_b.stress, reduction, tol);
  const Certificate cert = certify_universal_rigidity(result.reduced, result.stress, tol);

  std::cout << std::setprecision(12) << "c: " << result.c << "\n";
  std::cout << "nullity: " << cert.nullity << "\n";
  std::cout << std::setprecision(12) << "min eigenvalue: " << cert.eigenvalues.minCoeff()
            << "\n";
  if (!cert.certified()) {
    for (const std::string& reason : cert.reasons) std::cout << "failed: " << reason << "\n";
    return 1;
  }

  FrameworkDocument out_doc;
  out_doc.framework = result.reduced;
  out_doc.stress = result.stress;
  out_doc.shared = att.shared_indices;
  save_document(out_doc, out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_gen(int d, int v, std::uint64_t seed, const std::string& out,
            const Tolerances& tol) {
  const LaterationPlan plan = random_lateration_plan(d, v, seed);
  CertifiedFramework result = generate_lateration(plan, tol);
  FrameworkDocument doc;
  doc.framework = std::move(result.framework);
  doc.stress = std::move(result.stress);
  save_document(doc, out);
  std::cout << "wrote " << out << " (v=" << v << ", e="
            << doc.framework.graph().edge_count() << ", d=" << d << ")\n";
  return 0;
}

int cmd_counterexample(const std::string& a_path, const std::string& b_path,
                       const std::string& share, const std::string& out,
                       const Tolerances& tol) {
  const FrameworkDocument doc_a = load_document(a_path);
  const FrameworkDocument doc_b = load_document(b_path);
  const AttachmentSpec spec(parse_share(share));
  const Attachment att = attach(doc_a.framework, doc_b.framework, spec, tol);
  const Framework flipped = reflection_counterexample(att, tol);

  double max_change = 0.0;
  const auto& before = att.framework.config().points();
  const auto& after = flipped.config().points();
  for (int i = 0; i < before.cols(); ++i) {
    for (int j = i + 1; j < before.cols(); ++j) {
      const double db = (before.col(i) - before.col(j)).norm();
      const double da = (after.col(i) - after.col(j)).norm();
      max_change = std::max(max_change, std::abs(db - da));
    }
  }

  FrameworkDocument out_doc;
  out_doc.framework = flipped;
  out_doc.shared = att.shared_indices;
  save_document(out_doc, out);
  std::cout << std::setprecision(12) << "max pairwise-distance discrepancy: " << max_change
            << "\n";
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_plot(const std::string& input, const std::string& out) {
  const FrameworkDocument doc = load_document(input);
  const std::string svg = render_svg(doc);
  std::ofstream file(out);
  if (!file) throw Error("cannot write '" + out + "'");
  file << svg;
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_flex(const std::string& input, const Tolerances& tol) {
  const FrameworkDocument doc = load_document(input);
  const Eigen::MatrixXd basis = nontrivial_flex_space(doc.framework, tol);
  std::cout << "nontrivial flex dimension: " << basis.cols() << "\n";
  return 0;
}

int cmd_genpos(const std::string& input, const Tolerances& tol) {
  const FrameworkDocument doc = load_document(input);
  const bool ok = is_general_position(doc.framework.config(), tol);
  std::cout << (ok ? "general position" : "not in general position") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"universal-rigidity certificates for bar-joint frameworks"};
  app.require_subcommand(1);

  Tolerances tol;
  auto add_tol = [&tol](CLI::App* sub) {
    sub->add_option("--tol-zero", tol.zero_rel, "relative zero threshold for spectra");
    sub->add_option("--tol-geom", tol.geom_abs, "absolute geometric tolerance");
  };

  std::string input, a_path, b_path, out, share, reduce;
  int d = 2, v = 6;
  std::uint64_t seed = 0;

  CLI::App* certify = app.add_subcommand("certify", "verify a stress-matrix certificate");
  certify->add_option("input", input, "framework document with a stress block")->required();
  add_tol(certify);

  CLI::App* attach_cmd = app.add_subcommand("attach", "attach two certified frameworks");
  attach_cmd->add_option("a", a_path, "kept-side document")->required();
  attach_cmd->add_option("b", b_path, "joined document")->required();
  attach_cmd->add_option("--share", share, "correspondences a:b,a:b (1-based)")->required();
  attach_cmd->add_option("--reduce", reduce, "edges to remove i-j,k-l (combined labels)");
  attach_cmd->add_option("-o,--out", out, "output document")->required();
  add_tol(attach_cmd);

  CLI::App* gen = app.add_subcommand("gen", "generate a certified lateration framework");
  gen->add_option("--d", d, "dimension")->required();
  gen->add_option("--v", v, "vertex count")->required();
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("-o,--out", out, "output document")->required();
  add_tol(gen);

  CLI::App* counter = app.add_subcommand(
      "counterexample", "reflect an attachment joined on too few vertices");
  counter->add_option("a", a_path, "first document")->required();
  counter->add_option("b", b_path, "second document")->required();
  counter->add_option("--share", share, "correspondences a:b,... with n <= d")->required();
  counter->add_option("-o,--out", out, "output document")->required();
  add_tol(counter);

  CLI::App* plot = app.add_subcommand("plot", "render a 2-D framework as SVG");
  plot->add_option("input", input, "framework document")->required();
  plot->add_option("-o,--out", out, "output SVG path")->required();

  CLI::App* flex = app.add_subcommand("flex", "print the nontrivial flex dimension");
  flex->add_option("input", input, "framework document")->required();
  add_tol(flex);

  CLI::App* genpos = app.add_subcommand("genpos", "check general position");
  genpos->add_option("input", input, "framework document")->required();
  add_tol(genpos);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    validate(tol);
    if (certify->parsed()) return cmd_certify(input, tol);
    if (attach_cmd->parsed()) return cmd_attach(a_path, b_path, share, reduce, out, tol);
    if (gen->parsed()) {
      if (d < 1 || v < d + 1) {
        std::cerr << "error: gen needs d >= 1 and v >= d+1\n";
        return 2;
      }
      return cmd_gen(d, v, seed, out, tol);
    }
    if (counter->parsed()) return cmd_counterexample(a_path, b_path, share, out, tol);
    if (plot->parsed()) return cmd_plot(input, out);
    if (flex->parsed()) return cmd_flex(input, tol);
    if (genpos->parsed()) return cmd_genpos(input, tol);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
