#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "instances.hpp"
#include "wtensor/baselines.hpp"
#include "wtensor/copositivity.hpp"
#include "wtensor/eigen_sos.hpp"
#include "wtensor/error.hpp"
#include "wtensor/parallel.hpp"
#include "wtensor/tensor_io.hpp"

namespace wtensor::cli {

using nlohmann::json;

namespace {

Instance load_source(const SourceOptions& s) {
  const int given = !s.input.empty() + !s.hypergraph.empty() + !s.gen.empty();
  if (given != 1) throw Error(ErrorCode::InvalidArgument, "give exactly one of --input, --hypergraph, --gen");
  if (s.laplacian && s.signless) throw Error(ErrorCode::InvalidArgument, "--laplacian and --signless exclude each other");
  const GraphTensor as = s.laplacian ? GraphTensor::Laplacian : s.signless ? GraphTensor::Signless : GraphTensor::Adjacency;
  if (!s.input.empty()) {
    if (s.laplacian || s.signless) {
      throw Error(ErrorCode::InvalidArgument, "--laplacian/--signless apply to hypergraph sources only");
    }
    Instance inst;
    inst.tensor = read_tensor_file(s.input);
    inst.label = s.input;
    return inst;
  }
  if (!s.hypergraph.empty()) {
    Instance inst;
    inst.graph = read_edge_list_file(s.hypergraph);
    inst.label = s.hypergraph;
    if (as == GraphTensor::Adjacency) {
      inst.tensor = adjacency_tensor(*inst.graph);
    } else {
      inst.tensor = as == GraphTensor::Laplacian ? laplacian(*inst.graph) : signless_laplacian(*inst.graph);
      inst.decomposition = laplacian_w_decomposition(*inst.graph, as == GraphTensor::Signless);
    }
    return inst;
  }
  return make_instance(parse_gen_spec(s.gen), as);
}

std::string certificate_path(const std::string& explicit_path, const std::string& report) {
  if (!explicit_path.empty()) return explicit_path;
  if (report.empty()) return "";
  std::filesystem::path p(report);
  p.replace_extension(".cert.json");
  return p.string();
}

json timings_json(const PhaseTimings& t) {
  return {{"compile", t.compile}, {"solve", t.solve}, {"verify", t.verify}};
}

json verify_json(const VerifyReport& r) {
  return {{"passed", r.passed},
          {"max_coefficient_residual", r.max_residual},
          {"residual_limit", r.residual_limit},
          {"min_gram_eigenvalue", r.min_gram_eig},
          {"coupling_violation", r.coupling_violation},
          {"amgm_margin", r.amgm_margin}};
}

/// Writes the certificate (if a path is set) and fills the report's certificate entry.
bool attach_certificate(json& report, const SosCertificate& cert, const std::string& path) {
  if (!path.empty()) write_json_file(path, certificate_to_json(cert));
  report["certificate"] = {{"path", path.empty() ? json(nullptr) : json(path)}, {"verify", verify_json(cert.report)}};
  return cert.report.passed;
}

void finish_report(const json& report, const std::string& path, bool to_stdout) {
  if (!path.empty()) write_json_file(path, report);
  if (to_stdout) std::cout << report.dump(2) << "\n";
}

void write_dump(const std::string& path, const CompiledProblem& cp) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  sdp::write_problem(out, cp.problem);
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

}  // namespace

int cmd_max_eig(const MaxEigOptions& o, const std::string& echo) {
  const Instance inst = load_source(o.source);
  const SymmetricTensor& t = inst.tensor;
  json report = {{"command", echo},
                 {"instance", inst.label},
                 {"input_digest", tensor_digest(t)},
                 {"order", t.order()},
                 {"dim", t.dim()},
                 {"method", o.method}};

  if (o.method == "nqz") {
    const auto r = nqz(t);
    report.update({{"lambda", r.lambda}, {"lower", r.lower}, {"upper", r.upper},
                   {"iterations", r.iterations}, {"converged", r.converged}});
    if (!o.json) {
      std::cout << "lambda " << fixed6(r.lambda) << "\n"
                << "method nqz, bracket [" << fixed6(r.lower) << ", " << fixed6(r.upper) << "], " << r.iterations
                << " iterations\n";
    }
    finish_report(report, o.report, o.json);
    if (!r.converged) {
      std::cerr << "error: NQZ did not converge within " << r.iterations << " iterations\n";
      return kFailure;
    }
    return kOk;
  }
  if (o.method == "ascent") {
    AscentConfig ac;
    ac.starts = o.starts;
    ac.seed = o.seed;
    ac.threads = threads_from_env();
    const auto r = projected_ascent(t, ac);
    report.update({{"lambda", r.lambda}, {"lower_bound", true}, {"x", r.x}});
    if (!o.json) {
      std::cout << "lambda " << fixed6(r.lambda) << "\n"
                << "method ascent (lower bound), " << o.starts << " starts, seed " << o.seed << "\n";
    }
    finish_report(report, o.report, o.json);
    return kOk;
  }

  EigConfig cfg;
  cfg.method = method_from_string(o.method);
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.verbose = o.verbose;
  std::optional<WDecomposition> w = inst.decomposition;
  if (!o.decomposition.empty()) w = decomposition_from_json(t, read_json_file(o.decomposition));
  const EigResult r = max_h_eigenvalue(t, cfg, w ? &*w : nullptr);

  if (!o.dump_sdp.empty()) {
    if (r.method == Method::Full) {
      write_dump(o.dump_sdp, compile_full(t));
    } else {
      if (!w) w = detect(t);
      write_dump(o.dump_sdp, compile_block(*w, r.method == Method::ClosedForm));
    }
    report["sdp_dump"] = o.dump_sdp;
  }

  report["method"] = to_string(r.method);
  report.update({{"lambda", r.lambda},
                 {"status", sdp::to_string(r.status)},
                 {"iterations", r.iterations},
                 {"psd_blocks", r.psd_blocks},
                 {"rows", r.rows},
                 {"residuals", {{"primal", r.primal_residual}, {"dual", r.dual_residual}, {"gap", r.gap}}}});
  if (!r.solver_message.empty()) report["solver_message"] = r.solver_message;
  if (o.timings) report["timings"] = timings_json(r.timings);
  const std::string cert_path = certificate_path(o.certificate, o.report);
  const bool verified = attach_certificate(report, r.certificate, cert_path);

  if (!o.json) {
    const auto& v = r.certificate.report;
    std::cout << "lambda " << fixed6(r.lambda) << "\n"
              << "method " << to_string(r.method) << ", " << r.psd_blocks << " psd blocks, " << r.rows << " rows, "
              << r.iterations << " iterations\n"
              << "certificate " << (v.passed ? "verified" : "FAILED") << ": coefficient residual "
              << sci(v.max_residual) << " (limit " << sci(v.residual_limit) << "), min Gram eigenvalue "
              << sci(v.min_gram_eig) << "\n";
    if (!cert_path.empty()) std::cout << "certificate written to " << cert_path << "\n";
    if (o.timings) {
      std::cout << "timings compile " << fixed6(r.timings.compile) << " s, solve " << fixed6(r.timings.solve)
                << " s, verify " << fixed6(r.timings.verify) << " s\n";
    }
  }
  finish_report(report, o.report, o.json);
  if (!verified) {
    std::cerr << "error: certificate verification failed: " << r.certificate.report.detail << "\n";
    return kFailure;
  }
  return kOk;
}

int cmd_copositive(const CopositiveOptions& o, const std::string& echo) {
  const Instance inst = load_source(o.source);
  EigConfig cfg;
  cfg.method = method_from_string(o.method);
  cfg.tol = o.tol;
  const auto v = is_copositive(inst.tensor, cfg);
  json report = {{"command", echo},
                 {"instance", inst.label},
                 {"input_digest", tensor_digest(inst.tensor)},
                 {"verdict", to_string(v.verdict)}};
  bool verified = true;
  if (v.verdict != Verdict::NotExtendedZ) {
    report.update({{"bound", v.bound}, {"threshold", kCopositiveThreshold}, {"borderline", v.borderline},
                   {"blocks", v.structure->blocks.size()}});
    if (!v.witness.empty()) report["witness"] = v.witness;
    if (o.timings) report["timings"] = timings_json(v.eig->timings);
    verified = attach_certificate(report, v.eig->certificate, certificate_path(o.certificate, o.report));
  }
  if (!v.message.empty()) report["message"] = v.message;

  if (!o.json) {
    std::cout << "verdict " << to_string(v.verdict) << "\n";
    if (v.verdict != Verdict::NotExtendedZ) {
      std::cout << "bound " << fixed6(v.bound) << " (copositive iff <= " << sci(kCopositiveThreshold) << ")\n";
    }
    if (!v.message.empty()) std::cout << "note " << v.message << "\n";
  }
  finish_report(report, o.report, o.json);
  if (!verified) {
    std::cerr << "error: certificate verification failed\n";
    return kFailure;
  }
  switch (v.verdict) {
    case Verdict::Copositive: return kOk;
    case Verdict::NotCopositive: return kNotCopositive;
    case Verdict::NotExtendedZ: return kNotExtendedZ;
  }
  return kFailure;
}

int cmd_gen(const GenOptions& o) {
  GenSpec spec;
  spec.kind = o.kind;
  spec.params = {{"m", std::to_string(o.m)}, {"k", std::to_string(o.k)}, {"seed", std::to_string(o.seed)}};
  if (o.n > 0) spec.params["n"] = std::to_string(o.n);
  if (o.s > 0) spec.params["s"] = std::to_string(o.s);
  if (o.kind == "randomz") spec.params["M"] = std::to_string(o.M);
  if (!o.tree.empty()) spec.params["tree"] = o.tree;
  const GraphTensor as = o.tensor == "adjacency" ? GraphTensor::Adjacency
                         : o.tensor == "signless" ? GraphTensor::Signless
                                                  : GraphTensor::Laplacian;
  const Instance inst = make_instance(spec, as);

  if (!o.out.empty()) {
    write_tensor_file(o.out, inst.tensor);
    std::cout << "tensor (" << inst.label << ", " << inst.tensor.num_terms() << " terms) written to " << o.out << "\n";
  }
  if (!o.edges.empty()) {
    if (!inst.graph) throw Error(ErrorCode::InvalidArgument, o.kind + " is not a hypergraph generator");
    write_edge_list_file(o.edges, *inst.graph);
    std::cout << "edge list (" << inst.graph->num_edges() << " edges) written to " << o.edges << "\n";
  }
  if (!o.decomposition.empty()) {
    if (!inst.decomposition) throw Error(ErrorCode::InvalidArgument, "no natural decomposition for this instance");
    write_json_file(o.decomposition, decomposition_to_json(*inst.decomposition));
    std::cout << "decomposition (" << inst.decomposition->size() << " blocks) written to " << o.decomposition << "\n";
  }
  if (o.out.empty() && o.edges.empty() && o.decomposition.empty()) {
    if (inst.graph) {
      write_edge_list(std::cout, *inst.graph);
    } else {
      std::cout << tensor_to_json(inst.tensor).dump() << "\n";
    }
  }
  return kOk;
}

}  // namespace wtensor::cli
