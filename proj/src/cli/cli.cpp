#include "dhub/cli.hpp"

#include "dhub/http_server.hpp"
#include "dhub/synth.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <csignal>
#include <cstdio>
#include <map>
#include <ostream>
#include <pthread.h>
#include <thread>

namespace dhub {
namespace {

std::optional<WeightVector> weights_arg(const std::vector<double>& raw) {
  if (raw.empty()) return std::nullopt;
  WeightVector w{};
  std::copy(raw.begin(), raw.end(), w.begin());
  return w;
}

std::string pad_left(std::string s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(std::string s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string profile_header(const WeightProfile& p) {
  std::string line = "Weight profile: ";
  line += p.id == kDefaultProfileId ? "default" : "custom " + p.id;
  line += " (";
  for (auto d : all_values<Dimension>()) {
    if (d != Dimension::Geographic) line += ", ";
    line += std::string(to_string(d)) + " " + match::format_fixed(p.weight(d), 3);
  }
  return line + ")";
}

template <class T>
std::string counts_line(const std::vector<T>& items, auto key) {
  std::map<std::string, int> n;
  for (const auto& x : items) ++n[std::string(to_string(key(x)))];
  std::string names, values;
  for (auto v : all_values<decltype(key(items.front()))>()) {
    const auto name = std::string(to_string(v));
    names += (names.empty() ? "" : "/") + name;
    values += (values.empty() ? "" : "/") + std::to_string(n[name]);
  }
  return names + " " + values;
}

void print_table(std::ostream& out, const Challenge& c, const WeightProfile& profile,
                 const std::vector<match::RankedMatch>& ranked) {
  out << "Challenge " << c.id << " (" << to_string(c.domain) << ", " << c.country
      << "): " << c.title << "\n";
  out << profile_header(profile) << "\n";
  out << pad_left("Rank", 4) << "  " << pad_right("Solution", 12) << pad_left("Total", 7)
      << pad_left("Geo", 7) << pad_left("Time", 7) << pad_left("Budget", 7)
      << pad_left("Capab", 7) << pad_left("Cred", 7) << pad_left("Pop", 7) << "\n";
  for (const auto& r : ranked) {
    const auto tenths = match::display_tenths(r.match);
    out << pad_left(std::to_string(r.rank), 4) << "  " << pad_right(r.match.solution_id, 12)
        << pad_left(match::format_tenths(match::round_half_up_tenths(r.match.total)), 7);
    for (auto t : tenths) out << pad_left(match::format_tenths(t), 7);
    out << "\n";
  }
  if (ranked.empty()) out << "(no solutions)\n";
}

struct GenArgs {
  synth::GenConfig config;
  std::string out;
};

struct MatchArgs {
  std::string data, challenge, solution, format = "table";
  std::vector<double> weights;
  int top = kDefaultTopK;
};

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data, templates, snapshot;
  std::vector<std::string> cors;
  double threshold = 70.0;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const auto ds = synth::generate(a.config);
  export_dataset(ds, a.out, DatasetSections::Generated);
  out << "Wrote " << a.out << " (seed " << a.config.seed << ")\n";
  out << "organizations " << ds.organizations.size() << "  roles "
      << counts_line(ds.organizations, [](const Organization& o) { return o.role; }) << "\n";
  if (!ds.challenges.empty()) {
    out << "challenges " << ds.challenges.size() << "  domains "
        << counts_line(ds.challenges, [](const Challenge& c) { return c.domain; }) << "\n";
  }
  if (!ds.solutions.empty()) {
    out << "solutions " << ds.solutions.size() << "  domains "
        << counts_line(ds.solutions, [](const Solution& s) { return s.domain; }) << "\n";
  }
  return kExitOk;
}

int cmd_match(const MatchArgs& a, std::ostream& out) {
  auto store = Store::restore(a.data);
  Service service(*store, intake::TemplateSet::builtin());
  const auto profile = service.resolve_profile(weights_arg(a.weights));
  const auto ranked = service.compute_matches(a.challenge, weights_arg(a.weights), a.top);
  if (a.format == "json") {
    out << matches_body(ranked).dump() << "\n";
  } else {
    print_table(out, store->get<Challenge>(a.challenge), profile, ranked);
  }
  return kExitOk;
}

int cmd_explain(const MatchArgs& a, std::ostream& out) {
  auto store = Store::restore(a.data);
  Service service(*store, intake::TemplateSet::builtin());
  const auto profile = service.resolve_profile(weights_arg(a.weights));
  const auto challenge = store->get<Challenge>(a.challenge);
  const auto solution = store->get<Solution>(a.solution);
  const auto provider = store->get<Organization>(solution.provider_id);
  const auto result = match::score_pair(challenge, solution, provider, profile, service.now());
  for (const auto& line : match::explain(result)) out << line << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const auto ds = dataset_from_text(read_text_file(path));
  const auto problems = check_dataset(ds);
  for (const auto& p : problems) out << p << "\n";
  if (!problems.empty()) {
    out << "INVALID: " << problems.size() << " problem(s) in " << path << "\n";
    return kExitDomainError;
  }
  out << "OK: " << ds.organizations.size() << " organizations, " << ds.challenges.size()
      << " challenges, " << ds.solutions.size() << " solutions, " << ds.matches.size()
      << " matches, " << ds.deployments.size() << " deployments\n";
  return kExitOk;
}

int cmd_serve(const ServeArgs& a, std::ostream& out) {
  auto store = Store::restore(a.data);
  auto templates = a.templates.empty() ? intake::TemplateSet::builtin()
                                       : intake::TemplateSet::load(a.templates);
  ServiceOptions options;
  options.opportunity_threshold = a.threshold;
  Service service(*store, std::move(templates), options);
  HttpServer server(service, HttpConfig{a.host, a.port, a.cors});

  sigset_t signals, previous;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  int port = 0;
  try {
    port = server.bind();
  } catch (...) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    throw;
  }
  out << "dhub listening on http://" << a.host << ":" << port << "/v1\n" << std::flush;

  std::atomic<bool> finished = false;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    if (!finished) server.stop();
  });
  server.listen();
  finished = true;
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);

  const std::string target = a.snapshot.empty() ? a.data : a.snapshot;
  store->snapshot(target);
  out << "snapshot written to " << target << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GSI D-Hub matchmaking: synthetic data, explainable matching and the /v1 service"};
  app.name("dhub");
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a deterministic synthetic dataset");
  g->add_option("--seed", gen.config.seed, "PRNG seed")->capture_default_str();
  g->add_option("--orgs", gen.config.n_orgs, "Organizations")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  g->add_option("--challenges", gen.config.n_challenges, "Challenges")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  g->add_option("--solutions", gen.config.n_solutions, "Solutions")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  g->add_option("--out", gen.out, "Output file")->required();

  MatchArgs m;
  auto* mc = app.add_subcommand("match", "Rank all solutions for a challenge");
  mc->add_option("--data", m.data, "Dataset or snapshot file")->required()->check(CLI::ExistingFile);
  mc->add_option("--challenge", m.challenge, "Challenge id")->required();
  mc->add_option("--weights", m.weights, "Six raw weights in dimension order")->expected(6);
  mc->add_option("--top", m.top, "Number of results")->check(CLI::PositiveNumber)->capture_default_str();
  mc->add_option("--format", m.format, "Output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  MatchArgs e;
  auto* ec = app.add_subcommand("explain", "Explain one challenge/solution score");
  ec->add_option("--data", e.data, "Dataset or snapshot file")->required()->check(CLI::ExistingFile);
  ec->add_option("--challenge", e.challenge, "Challenge id")->required();
  ec->add_option("--solution", e.solution, "Solution id")->required();
  ec->add_option("--weights", e.weights, "Six raw weights in dimension order")->expected(6);

  std::string validate_path;
  auto* vc = app.add_subcommand("validate", "Check every record and reference in a dataset");
  vc->add_option("--data", validate_path, "Dataset or snapshot file")
      ->required()
      ->check(CLI::ExistingFile);

  ServeArgs s;
  auto* sc = app.add_subcommand("serve", "Run the HTTP API");
  sc->add_option("--port", s.port, "Port (0 picks a free one)")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  sc->add_option("--host", s.host, "Bind address")->capture_default_str();
  sc->add_option("--data", s.data, "Dataset or snapshot file")->required()->check(CLI::ExistingFile);
  sc->add_option("--templates", s.templates, "Intake template file")->check(CLI::ExistingFile);
  sc->add_option("--snapshot", s.snapshot, "Snapshot written on shutdown (default: --data)");
  sc->add_option("--cors", s.cors, "Allowed browser origins");
  sc->add_option("--threshold", s.threshold, "Provider opportunity threshold")
      ->check(CLI::Range(0.0, 100.0))
      ->capture_default_str();

  std::vector<const char*> argv{"dhub"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen, out);
    if (*mc) return cmd_match(m, out);
    if (*ec) return cmd_explain(e, out);
    if (*vc) return cmd_validate(validate_path, out);
    if (*sc) return cmd_serve(s, out);
  } catch (const Error& ex) {
    err << "error: " << to_string(ex.code()) << ": " << ex.what() << "\n";
    for (const auto& d : ex.details()) err << "  " << d << "\n";
    return kExitDomainError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace dhub
