#include "delegation.hpp"
#include "dhub/service.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace dhub;
using namespace dhub::testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::Input;
}

struct Env {
  Store store;
  Service service{store, intake::TemplateSet::builtin(), options()};

  static ServiceOptions options() {
    ServiceOptions o;
    o.clock = fixed_time;
    return o;
  }
};

struct Small : Env {
  Small() {
    store.put(make_org("org-000001", OrgRole::Deployer));
    store.put(make_org("org-000002", OrgRole::Provider));
    store.put(make_org("org-000003", OrgRole::Financier, "BR"));
    store.put(make_challenge("chl-000001", "org-000001"));
    store.put(make_solution("sol-000001", "org-000002"));
  }
};

}  // namespace

TEST(Service, ComputeMatchesEqualsEngine) {
  Env env;
  env.store.load(seed42());
  std::map<std::string, Organization> orgs;
  const auto cands = candidates_of(seed42(), orgs);
  for (const auto& c : seed42().challenges) {
    if (c.id > "chl-000010") break;
    const auto direct = match::rank_solutions(c, cands, default_profile(), 10, fixed_time());
    EXPECT_EQ(env.service.compute_matches(c.id, std::nullopt, 10), direct) << c.id;
  }
  const auto one = env.service.compute_matches("chl-000001", WeightVector{1, 1, 1, 1, 1, 1}, 1);
  ASSERT_EQ(one.size(), 1u);
  const auto brute = oracle::brute_force_ranking(seed42(), seed42().challenges[0],
                                                 {1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6});
  EXPECT_EQ(one[0].match.solution_id, brute.front().solution_id);
  EXPECT_TRUE(env.store.integrity_scan().empty());
}

TEST(Service, RecomputeKeepsStoredResult) {
  Small s;
  const auto first = s.service.compute_matches("chl-000001", std::nullopt, 10);
  const auto again = s.service.compute_matches("chl-000001", std::nullopt, 10);
  EXPECT_EQ(first, again);
  EXPECT_EQ(s.service.stored_matches("chl-000001", std::nullopt).size(), 1u);
}

TEST(Service, InvalidWeightsAreValidationErrors) {
  Small s;
  EXPECT_EQ(code_of([&] { s.service.compute_matches("chl-000001", WeightVector{0, 0, 0, 0, 0, 0}, 10); }),
            ErrorCode::Validation);
  EXPECT_EQ(code_of([&] { s.service.compute_matches("chl-000001", WeightVector{-1, 1, 1, 1, 1, 1}, 10); }),
            ErrorCode::Validation);
  EXPECT_EQ(code_of([&] { s.service.compute_matches("chl-000001", std::nullopt, 0); }), ErrorCode::Input);
  EXPECT_EQ(code_of([&] { s.service.compute_matches("chl-404", std::nullopt, 10); }), ErrorCode::NotFound);
}

TEST(Coverage, Examples) {
  Env empty;
  EXPECT_TRUE(empty.service.coverage().empty());

  Env one;
  one.store.put(make_org("org-000001", OrgRole::Deployer));
  one.store.put(make_challenge("chl-000001", "org-000001"));
  const auto cells = one.service.coverage();
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0], (CoverageCell{"KE", 1, 0, 0, 1}));

  one.store.put(make_org("org-000002", OrgRole::Provider, "NP"));
  one.store.put(make_solution("sol-000001", "org-000002", Domain::Agriculture, Coverage::everywhere()));
  for (const auto& cell : one.service.coverage()) EXPECT_EQ(cell.available_solutions, 1) << cell.country;
}

TEST(Coverage, ActiveDeploymentsCloseTheGap) {
  Small s;
  const auto m = s.service.compute_matches("chl-000001", std::nullopt, 1).front().match;
  const auto d = s.service.create_deployment(m.id, std::nullopt, Money::parse("10"));
  auto ke = [&] {
    for (const auto& c : s.service.coverage()) {
      if (c.country == "KE") return c;
    }
    return CoverageCell{};
  };
  EXPECT_EQ(ke().gap, 1);
  s.service.transition(d.id, DeploymentStatus::Active);
  EXPECT_EQ(ke(), (CoverageCell{"KE", 1, 1, 1, 0}));
}

TEST(Deal, Lifecycle) {
  Small s;
  const auto m = s.service.compute_matches("chl-000001", std::nullopt, 1).front().match;
  auto d = s.service.create_deployment(m.id, "org-000003", Money::parse("5000"),
                                       {{"Survey", parse_date("2025-07-01"), MilestoneStatus::Pending}});
  EXPECT_EQ(d.status, DeploymentStatus::Proposed);
  EXPECT_EQ(d.created_at, fixed_time());
  EXPECT_EQ(code_of([&] { s.service.transition(d.id, DeploymentStatus::Completed); }), ErrorCode::State);
  d = s.service.set_milestone_status(d.id, "Survey", MilestoneStatus::Done);
  EXPECT_EQ(d.milestones[0].status, MilestoneStatus::Done);
  EXPECT_EQ(code_of([&] { s.service.set_milestone_status(d.id, "Nope", MilestoneStatus::Done); }),
            ErrorCode::NotFound);
  s.service.transition(d.id, DeploymentStatus::Active);
  d = s.service.transition(d.id, DeploymentStatus::Completed);
  EXPECT_EQ(d.status, DeploymentStatus::Completed);
  EXPECT_EQ(code_of([&] { s.service.add_milestone(d.id, {"Late", parse_date("2026-01-01")}); }),
            ErrorCode::State);
  EXPECT_EQ(code_of([&] { s.service.create_deployment(m.id, "org-000001", Money{}, {}); }),
            ErrorCode::Integrity);
  EXPECT_EQ(code_of([&] { s.service.create_deployment("mat-x", std::nullopt, Money{}, {}); }),
            ErrorCode::NotFound);
  EXPECT_EQ(s.store.trace(d.id).size(), 7u);
}

TEST(Dashboard, Shapes) {
  Small s;
  const auto deployer = s.service.dashboard(OrgRole::Deployer, "org-000001");
  ASSERT_EQ(deployer.at("challenges").size(), 1u);
  EXPECT_EQ(deployer.at("challenges")[0].at("top_matches").size(), 1u);
  EXPECT_TRUE(s.store.all<MatchResult>().empty());  // previews are not persisted

  const auto provider = s.service.dashboard(OrgRole::Provider, "org-000002");
  EXPECT_EQ(provider.at("solutions")[0].at("opportunities"), 0);
  s.service.compute_matches("chl-000001", std::nullopt, 10);
  const double total = s.store.all<MatchResult>().front().total;
  EXPECT_EQ(s.service.dashboard(OrgRole::Provider, "org-000002", total).at("solutions")[0].at("opportunities"), 1);
  EXPECT_EQ(s.service.dashboard(OrgRole::Provider, "org-000002", total + 0.01).at("solutions")[0].at("opportunities"), 0);

  EXPECT_EQ(code_of([&] { s.service.dashboard(OrgRole::Financier, "org-000001"); }), ErrorCode::Input);
  EXPECT_EQ(code_of([&] { s.service.dashboard(OrgRole::Deployer, "org-404"); }), ErrorCode::NotFound);
}

TEST(Intake, CompileChecksDeployer) {
  Small s;
  const std::vector<IntakeAnswer> answers{{"core.title", "Pumps"},       {"core.country", "KE"},
                                          {"core.population", "100"},    {"core.budget", "1000"},
                                          {"core.window", "3"},          {"core.capabilities", "solar"}};
  EXPECT_EQ(s.service.compile_intake("org-000001", Domain::Water, answers),
            intake::compile(s.service.templates(), "org-000001", Domain::Water, answers));
  EXPECT_EQ(code_of([&] { s.service.compile_intake("org-000002", Domain::Water, answers); }),
            ErrorCode::Integrity);
  EXPECT_EQ(code_of([&] { s.service.compile_intake("org-404", Domain::Water, answers); }),
            ErrorCode::NotFound);
}

TEST(Http, StatusMapping) {
  EXPECT_EQ(http_status(ErrorCode::Input), 400);
  EXPECT_EQ(http_status(ErrorCode::Parse), 400);
  EXPECT_EQ(http_status(ErrorCode::Format), 400);
  EXPECT_EQ(http_status(ErrorCode::NotFound), 404);
  EXPECT_EQ(http_status(ErrorCode::Integrity), 409);
  EXPECT_EQ(http_status(ErrorCode::State), 409);
  EXPECT_EQ(http_status(ErrorCode::Validation), 422);
  EXPECT_EQ(http_status(ErrorCode::Completeness), 422);
}

TEST(Http, EndpointsDelegateToModules) {
  const auto checks = run_api_delegation();
  EXPECT_GT(checks.size(), 50u);
  for (const auto& c : checks) EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;
}

TEST(Http, BindFailureIsConfigError) {
  Small s;
  HttpServer first(s.service, HttpConfig{"127.0.0.1", 0, {}});
  first.start();
  HttpServer second(s.service, HttpConfig{"127.0.0.1", first.port(), {}});
  EXPECT_EQ(code_of([&] { second.bind(); }), ErrorCode::Config);
  // TEST-NET-3 is never a local address
  HttpServer remote(s.service, HttpConfig{"203.0.113.7", 0, {}});
  EXPECT_EQ(code_of([&] { remote.bind(); }), ErrorCode::Config);
}
