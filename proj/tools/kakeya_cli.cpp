// Command-line front end: Kakeya set files, rank tables, certificates and
// the self-test suites.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kakeya/bounds.hpp"
#include "kakeya/incidence.hpp"
#include "kakeya/kakeya_set.hpp"
#include "kakeya/polyspace.hpp"
#include "kakeya/selftest.hpp"

using namespace kakeya;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;
constexpr int kGuard = 3;

// Thrown for bad command-line combinations detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::uint64_t> N;
  std::vector<unsigned> n;
  std::vector<std::uint32_t> p;
  std::vector<unsigned> k;
  unsigned t = 2;
  std::string method = "tangent-product";
  std::string pipeline = "auto";
  std::string out;
  std::string format = "json";
  std::size_t guard = kDefaultCellGuard;
  std::uint64_t budget = 50'000'000;
  std::uint64_t target = 0;
  std::uint64_t seed = 0;
  std::string filter;
  std::string file;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

template <typename T>
T single(const std::vector<T>& v, const char* flag) {
  if (v.size() != 1) throw UsageError(std::string(flag) + " needs exactly one value");
  return v.front();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// wrank --------------------------------------------------------------------

constexpr const char* kWrankColumns =
    "p,k,n,extent,rank,formula,formula_check,status,seconds";

int cmd_wrank(const Options& o) {
  if (o.p.empty() || o.n.empty()) throw UsageError("wrank needs --p and --n");
  const std::vector<unsigned> ks = o.k.empty() ? std::vector<unsigned>{1} : o.k;
  json rows = json::array();
  std::ostringstream csv;
  csv << kWrankColumns << "\n";
  bool formula_failed = false;
  for (std::uint32_t p : o.p) {
    for (unsigned k : ks) {
      for (unsigned n : o.n) {
        json row{{"p", p}, {"k", k}, {"n", n}};
        const std::uint64_t extent = ipow(ipow(p, k), n);
        row["extent"] = json_count(extent);
        const auto start = std::chrono::steady_clock::now();
        std::string status = "ok", rank_text, formula_text, check_text;
        try {
          const std::size_t r = rank(build_W_pk(p, k, n, o.guard));
          row["rank"] = json_count(r);
          rank_text = std::to_string(r);
          if (k == 1) {
            const std::uint64_t f = binomial(p + n - 2, n - 1) + 1;
            row["formula"] = json_count(f);
            row["formula_check"] = r == f ? "pass" : "fail";
            formula_text = std::to_string(f);
            check_text = r == f ? "pass" : "fail";
            formula_failed = formula_failed || r != f;
          }
        } catch (const GuardExceeded& e) {
          status = "refused";
          row["message"] = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        row["status"] = status;
        row["seconds"] = secs;
        rows.push_back(row);
        csv << p << ',' << k << ',' << n << ',' << extent << ',' << rank_text << ','
            << formula_text << ',' << check_text << ',' << status << ',' << secs
            << "\n";
      }
    }
  }
  emit(o, o.format == "csv" ? csv.str() : dump(json{{"rows", rows}}));
  return formula_failed ? kFailure : kOk;
}

// kakeya -------------------------------------------------------------------

KakeyaSet construct(const Options& o) {
  const RingSpec spec = RingSpec::make(single(o.N, "--N"),
                                       static_cast<int>(single(o.n, "--n")));
  const auto n = static_cast<unsigned>(spec.dim());
  if (o.method == "full") return full_set(spec);
  if (o.method == "tangent" || o.method == "tangent-product") {
    if (!spec.is_square_free()) {
      throw UsageError(o.method + " needs a square-free modulus");
    }
    if (o.method == "tangent" && spec.kind() != RingKind::kPrime) {
      throw UsageError("tangent needs a prime modulus; use tangent-product");
    }
    std::vector<KakeyaSet> parts;
    for (const auto& f : spec.factors()) {
      parts.push_back(tangent_construction(static_cast<std::uint32_t>(f.prime), n));
    }
    return crt_product(parts, spec);
  }
  if (o.method == "minimal") return min_kakeya_search(spec, o.budget).set;
  throw UsageError("unknown --method " + o.method +
                   " (full, tangent, tangent-product, minimal)");
}

int report_verify(const KakeyaSet& s, std::ostream& os) {
  const VerifyResult v = verify(s);
  if (v.valid) {
    os << "valid: " << s.spec().to_string() << ", " << s.size() << " points\n";
    return kOk;
  }
  os << "invalid: " << s.spec().to_string() << "\n";
  for (const auto& d : v.missing) {
    os << "  missing witness for direction " << coords_to_string(d.rep) << "\n";
  }
  for (const auto& d : v.uncontained) {
    os << "  witness for direction " << coords_to_string(d.rep)
       << " leaves the set\n";
  }
  for (const auto& p : v.problems) os << "  " << p << "\n";
  return kFailure;
}

int cmd_construct(const Options& o) {
  const KakeyaSet s = construct(o);
  if (!verify(s).valid) {
    report_verify(s, std::cerr);
    return kFailure;
  }
  emit(o, dump(to_json(s)));
  return kOk;
}

int cmd_verify(const Options& o) {
  const KakeyaSet s = kakeya_from_json(read_json_file(o.file));
  return report_verify(s, std::cout);
}

int cmd_minsearch(const Options& o) {
  const RingSpec spec = RingSpec::make(single(o.N, "--N"),
                                       static_cast<int>(single(o.n, "--n")));
  const MinKakeyaResult r = min_kakeya_search(spec, o.budget);
  json j{{"N", spec.modulus()},
         {"n", spec.dim()},
         {"optimum", json_count(r.size)},
         {"nodes", json_count(r.nodes)},
         {"set", to_json(r.set)}};
  emit(o, dump(j));
  return kOk;
}

int cmd_power(const Options& o) {
  const KakeyaSet s = kakeya_from_json(read_json_file(o.file));
  if (!verify(s).valid) {
    report_verify(s, std::cerr);
    return kFailure;
  }
  const KakeyaSet st = power_product(s, o.t);
  if (!verify(st).valid) {
    report_verify(st, std::cerr);
    return kFailure;
  }
  emit(o, dump(to_json(st)));
  return kOk;
}

// certify ------------------------------------------------------------------

int cmd_certify(const Options& o) {
  const KakeyaSet s = kakeya_from_json(read_json_file(o.file));
  if (report_verify(s, std::cerr) != kOk) return kFailure;
  const RingSpec& spec = s.spec();
  std::string pipeline = o.pipeline;
  if (pipeline == "auto") {
    if (spec.kind() == RingKind::kPrime) {
      pipeline = "prime";
    } else if (spec.kind() == RingKind::kPrimePower) {
      pipeline = "prime-power";
    } else {
      pipeline = "squarefree";
    }
  }
  BoundReport r;
  if (pipeline == "prime") {
    r = certify_prime(s, o.guard);
  } else if (pipeline == "two-primes") {
    r = certify_two_primes(s, o.guard);
  } else if (pipeline == "squarefree") {
    SquarefreeOptions so;
    if (!o.k.empty()) so.k = single(o.k, "--k");
    if (!o.p.empty()) so.p1 = single(o.p, "--p");
    so.guard = o.guard;
    r = certify_squarefree(s, so);
  } else if (pipeline == "prime-power") {
    r = certify_prime_power(s, o.guard);
  } else {
    throw UsageError("unknown --pipeline " + pipeline +
                     " (auto, prime, two-primes, squarefree, prime-power)");
  }
  emit(o, dump(to_json(r)));
  return r.passed() ? kOk : kFailure;
}

// mv -----------------------------------------------------------------------

json family_json(const MVFamily& f) { return {{"u", f.u}, {"v", f.v}}; }

int cmd_mv_search(const Options& o) {
  const auto p = single(o.p, "--p");
  const unsigned k = o.k.empty() ? 1 : single(o.k, "--k");
  const unsigned n = single(o.n, "--n");
  const std::uint64_t target =
      o.target ? o.target : ipow(ipow(p, k), n);
  const MvSearchResult r = mv_search(p, k, n, target, o.budget);
  const MvVerdict v = mv_verify(r.family, p, k, n);
  json j{{"p", p}, {"k", k}, {"n", n}, {"size", json_count(r.family.size())},
         {"nodes", json_count(r.nodes)}, {"reached_target", r.reached_target},
         {"valid", v.valid}};
  j.update(family_json(r.family));
  emit(o, dump(j));
  return v.valid ? kOk : kFailure;
}

int cmd_mv_verify(const Options& o) {
  const json j = read_json_file(o.file);
  MVFamily f;
  try {
    f.u = j.at("u").get<std::vector<Coords>>();
    f.v = j.at("v").get<std::vector<Coords>>();
    const auto p = j.at("p").get<std::uint32_t>();
    const auto k = j.at("k").get<unsigned>();
    const auto n = j.at("n").get<unsigned>();
    const MvVerdict v = mv_verify(f, p, k, n);
    json out{{"valid", v.valid},
             {"identity_submatrix", v.identity_submatrix},
             {"rank_lower_bound", v.valid ? json_count(mv_rank_bound(f)) : json(nullptr)},
             {"message", v.message}};
    if (v.offending) out["offending"] = {v.offending->first, v.offending->second};
    emit(o, dump(out));
    return v.valid ? kOk : kFailure;
  } catch (const json::exception& e) {
    throw InvalidArgument(o.file + ": " + e.what());
  }
}

// bound --------------------------------------------------------------------

int cmd_bound(const Options& o) {
  if (o.N.empty() || o.n.empty()) throw UsageError("bound needs --N and --n");
  json rows = json::array();
  std::ostringstream csv;
  csv << "N,n,bound_exact,bound_value\n";
  for (std::uint64_t N : o.N) {
    for (unsigned n : o.n) {
      const mpq_class b = squarefree_bound(N, n);
      rows.push_back({{"N", json_count(N)}, {"n", n}, {"bound", json_rational(b)}});
      csv << N << ',' << n << ',' << b.get_str() << ',' << b.get_d() << "\n";
    }
  }
  emit(o, o.format == "csv" ? csv.str() : dump(json{{"rows", rows}}));
  return kOk;
}

// selftest -----------------------------------------------------------------

int cmd_selftest(const Options& o) {
  const auto results = run_selftest(o.filter, o.seed);
  if (results.empty()) throw UsageError("no suite matches filter '" + o.filter + "'");
  bool ok = true;
  std::ostringstream text;
  json arr = json::array();
  for (const auto& r : results) {
    ok = ok && r.passed;
    text << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases
         << " cases, " << r.seconds << " s)";
    if (!r.passed) text << ": " << r.message;
    text << "\n";
    arr.push_back({{"suite", r.name}, {"passed", r.passed},
                   {"cases", r.cases}, {"message", r.message}, {"seconds", r.seconds}});
  }
  emit(o, o.format == "json" ? dump(json{{"seed", o.seed}, {"suites", arr}})
                             : text.str());
  return ok ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kakeya sets over Z/NZ: constructions, incidence ranks and "
               "certificates"};
  app.require_subcommand(1);
  Options o;

  auto add_guard = [&](CLI::App* c) {
    c->add_option("--guard", o.guard, "Maximum matrix cells")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };
  auto add_out = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output file (default: stdout)");
  };

  auto* wrank = app.add_subcommand(
      "wrank",
      "Rank table of W_{p^k,n} over F_p.\nCSV columns: p,k,n,extent,rank,"
      "formula,formula_check,status,seconds");
  wrank->add_option("--p", o.p, "Primes")->required()->delimiter(',');
  wrank->add_option("--k", o.k, "Exponents (default 1)")->delimiter(',');
  wrank->add_option("--n", o.n, "Dimensions")->required()->delimiter(',');
  wrank->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  add_guard(wrank);
  add_out(wrank);

  auto* kak = app.add_subcommand("kakeya", "Construct, verify, search and multiply Kakeya sets");
  kak->require_subcommand(1);
  auto* construct_cmd = kak->add_subcommand("construct", "Build and verify a set");
  construct_cmd->add_option("--N", o.N, "Modulus")->required()->expected(1);
  construct_cmd->add_option("--n", o.n, "Dimension")->required()->expected(1);
  construct_cmd->add_option("--method", o.method,
                            "full, tangent, tangent-product or minimal")
      ->capture_default_str();
  construct_cmd->add_option("--budget", o.budget, "Search node budget (minimal)");
  add_out(construct_cmd);
  auto* verify_cmd = kak->add_subcommand("verify", "Check a set file; lists violations");
  verify_cmd->add_option("file", o.file)->required();
  auto* min_cmd = kak->add_subcommand("minsearch", "Exact minimum-size Kakeya set");
  min_cmd->add_option("--N", o.N, "Modulus")->required()->expected(1);
  min_cmd->add_option("--n", o.n, "Dimension")->required()->expected(1);
  min_cmd->add_option("--budget", o.budget, "Search node budget")->capture_default_str();
  add_out(min_cmd);
  auto* power_cmd = kak->add_subcommand("power", "S^t of a set file");
  power_cmd->add_option("file", o.file)->required();
  power_cmd->add_option("--t", o.t, "Power")->capture_default_str()->check(CLI::PositiveNumber);
  add_out(power_cmd);

  auto* cert = app.add_subcommand("certify", "Run a rank certificate on a set file");
  cert->add_option("file", o.file)->required();
  cert->add_option("--pipeline", o.pipeline,
                   "auto, prime, two-primes, squarefree or prime-power")
      ->capture_default_str();
  cert->add_option("--k", o.k, "Multiplicity parameter k (squarefree)")->expected(1);
  cert->add_option("--p", o.p, "Prime playing p_1 (squarefree)")->expected(1);
  add_guard(cert);
  add_out(cert);

  auto* mv = app.add_subcommand("mv", "Matching-vector families");
  mv->require_subcommand(1);
  auto* mv_search_cmd = mv->add_subcommand("search", "Depth-first family search");
  mv_search_cmd->add_option("--p", o.p)->required()->expected(1);
  mv_search_cmd->add_option("--k", o.k)->expected(1);
  mv_search_cmd->add_option("--n", o.n)->required()->expected(1);
  mv_search_cmd->add_option("--target", o.target, "Stop at this size");
  mv_search_cmd->add_option("--budget", o.budget, "Node budget")->capture_default_str();
  add_out(mv_search_cmd);
  auto* mv_verify_cmd = mv->add_subcommand("verify", "Check a family file {p,k,n,u,v}");
  mv_verify_cmd->add_option("file", o.file)->required();
  add_out(mv_verify_cmd);

  auto* bound = app.add_subcommand(
      "bound", "Closed-form lower bound N^n / prod (2 - 1/p)^n.\n"
               "CSV columns: N,n,bound_exact,bound_value");
  bound->add_option("--N", o.N)->required()->delimiter(',');
  bound->add_option("--n", o.n)->required()->delimiter(',');
  bound->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  add_out(bound);

  auto* self = app.add_subcommand("selftest", "Run the property suites");
  self->add_option("--filter", o.filter, "Substring of suite names");
  self->add_option("--seed", o.seed)->capture_default_str();
  self->add_option("--format", o.format)->check(CLI::IsMember({"json", "text"}));
  add_out(self);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (self->parsed() && self->count("--format") == 0) o.format = "text";

  try {
    if (wrank->parsed()) return cmd_wrank(o);
    if (construct_cmd->parsed()) return cmd_construct(o);
    if (verify_cmd->parsed()) return cmd_verify(o);
    if (min_cmd->parsed()) return cmd_minsearch(o);
    if (power_cmd->parsed()) return cmd_power(o);
    if (cert->parsed()) return cmd_certify(o);
    if (mv_search_cmd->parsed()) return cmd_mv_search(o);
    if (mv_verify_cmd->parsed()) return cmd_mv_verify(o);
    if (bound->parsed()) return cmd_bound(o);
    if (self->parsed()) return cmd_selftest(o);
  } catch (const GuardExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kGuard;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
