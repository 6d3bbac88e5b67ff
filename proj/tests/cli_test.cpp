#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qnkit/cli/document.hpp"
#include "qnkit/cli/render.hpp"
#include "qnkit/cli/result.hpp"
#include "qnkit/cli/run.hpp"
#include "qnkit/cli/sweep.hpp"
#include "qnkit/networks.hpp"

using namespace qnkit;
using namespace qnkit::cli;
namespace fs = std::filesystem;

namespace {

const std::string models_dir = QNKIT_MODELS_DIR;

errc code_of(auto&& f)
{
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return errc::invalid_parameter;
}

std::string message_of(auto&& f)
{
    try {
        f();
    } catch (const error& e) {
        return e.what();
    }
    ADD_FAILURE() << "no error raised";
    return {};
}

json closed_doc()
{
    return json::parse(R"({
      "schema_version": 1, "kind": "closed-net", "population": [4], "think_time": [1.5],
      "stations": [
        {"name": "cpu", "service": [0.2], "visits": [1]},
        {"name": "disk", "service": [0.3], "visits": [0.5]},
        {"name": "net", "service": [0.1], "visits": [2]}
      ]})");
}

json open_doc(double lambda)
{
    json j = json::parse(R"({
      "schema_version": 1, "kind": "open-net", "arrival_rate": [1],
      "stations": [{"service": 0.25, "visits": 1}, {"service": 0.1, "visits": 2}]})");
    j["arrival_rate"][0] = lambda;
    return j;
}

class TempDir {
public:
    TempDir()
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() / ("qnkit_cli_" + std::string(info->name()));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }

    std::string write(const std::string& name, const std::string& text) const
    {
        const auto p = path_ / name;
        std::ofstream(p, std::ios::binary) << text;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

struct ToolRun {
    int status;
    std::string out;
};

ToolRun tool(const std::string& args)
{
    const std::string cmd = std::string(QNKIT_TOOL) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe)
        return {-1, {}};
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), n);
    const int raw = ::pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double scalar(const ResultDocument& r, const std::string& name)
{
    for (const auto& [n, v] : r.scalars)
        if (n == name)
            return v;
    ADD_FAILURE() << "no scalar " << name;
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

// Loading

TEST(LoadModel, ReliabilityModelIsAValidCtmc)
{
    const auto doc = load_model(models_dir + "/reliability.json");
    EXPECT_EQ(doc.kind, "markov-ctmc");
    const auto& p = std::get<MarkovPayload>(doc.payload);
    EXPECT_TRUE(p.continuous);
    EXPECT_EQ(p.states, (std::vector<std::string>{"2", "RC", "RB", "1", "0"}));
    EXPECT_EQ(p.absorbing, (std::vector<std::size_t>{2, 4}));
    EXPECT_EQ(p.time_unit, "seconds");
}

TEST(LoadModel, EveryShippedModelLoads)
{
    for (const auto& e : fs::directory_iterator(models_dir))
        EXPECT_NO_THROW(load_model(e.path().string())) << e.path();
}

TEST(LoadModel, EmptyFileIsAParseError)
{
    TempDir dir;
    EXPECT_EQ(code_of([&] { load_model(dir.write("empty.json", "")); }), errc::parse_error);
}

TEST(LoadModel, MissingFileIsAParseError)
{
    EXPECT_EQ(code_of([] { load_model("/nonexistent/model.json"); }), errc::parse_error);
}

TEST(LoadModel, ParseErrorReportsLineAndColumn)
{
    const auto msg = message_of([] { parse_model("{\n  \"schema_version\": 1,\n  \"kind\": ]\n}"); });
    EXPECT_NE(msg.find("line 3, column 11"), std::string::npos) << msg;
}

TEST(LoadModel, NegativeServiceNamesTheField)
{
    json j = closed_doc();
    j["stations"][2]["service"][0] = -0.1;
    EXPECT_EQ(code_of([&] { document_from_json(j); }), errc::validation_error);
    const auto msg = message_of([&] { document_from_json(j); });
    EXPECT_NE(msg.find("stations[2].service[0]"), std::string::npos) << msg;
}

TEST(LoadModel, SchemaErrorsNameTheFieldPath)
{
    struct Case {
        const char* pointer;
        json value;
        const char* path;
    };
    const std::vector<Case> cases{
        {"/stations/1/service", "fast", "stations[1].service"},
        {"/schema_version", 2, "schema_version"},
        {"/kind", "petri-net", "kind"},
        {"/stations/0/discipline", "random", "stations[0].discipline"},
        {"/stations/1/servers", "many", "stations[1].servers"},
        {"/think_time", json::array({1, 2}), "think_time"},
        {"/population/0", 1.5, "population[0]"},
    };
    for (const auto& c : cases) {
        json j = closed_doc();
        j[json::json_pointer(c.pointer)] = c.value;
        EXPECT_EQ(code_of([&] { document_from_json(j); }), errc::schema_error) << c.pointer;
        const auto msg = message_of([&] { document_from_json(j); });
        EXPECT_NE(msg.find(c.path), std::string::npos) << msg;
    }
}

TEST(LoadModel, MissingFieldIsASchemaError)
{
    json j = closed_doc();
    j.erase("population");
    const auto msg = message_of([&] { document_from_json(j); });
    EXPECT_NE(msg.find("SchemaError"), std::string::npos);
    EXPECT_NE(msg.find("population"), std::string::npos);
}

TEST(LoadModel, VisitsAndRoutingTogetherAreRejected)
{
    json j = closed_doc();
    j["routing"] = json::array({json::array({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})});
    EXPECT_EQ(code_of([&] { document_from_json(j); }), errc::schema_error);
}

TEST(LoadModel, RoutingDerivesVisitRatios)
{
    const auto doc = load_model(models_dir + "/central_server.json");
    const auto& m = std::get<NetworkPayload>(doc.payload).model;
    EXPECT_DOUBLE_EQ(m.visits(0, 0), 1.0);
    EXPECT_NEAR(m.visits(0, 1), 0.6, 1e-12);
    EXPECT_NEAR(m.visits(0, 2), 0.3, 1e-12);
}

TEST(LoadModel, ReducibleRoutingIsAValidationError)
{
    json j = closed_doc();
    for (auto& s : j["stations"])
        s.erase("visits");
    j["routing"] = json::array({json::array({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}})});
    EXPECT_EQ(code_of([&] { document_from_json(j); }), errc::validation_error);
}

TEST(LoadModel, OpenRoutingUsesPerStationArrivals)
{
    const json j = json::parse(R"({
      "schema_version": 1, "kind": "open-net",
      "arrivals": [[2, 0]],
      "stations": [{"service": 0.1}, {"service": 0.2}],
      "routing": [[[0, 0.5], [0, 0]]]})");
    const auto doc = document_from_json(j);
    const auto& m = std::get<NetworkPayload>(doc.payload).model;
    EXPECT_DOUBLE_EQ(m.arrival_rate[0], 2.0);
    EXPECT_NEAR(m.visits(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(m.visits(0, 1), 0.5, 1e-12);
}

TEST(LoadModel, InvalidGeneratorIsAValidationError)
{
    const json j = json::parse(R"({"schema_version": 1, "kind": "markov-ctmc", "matrix": [[-1, 2], [1, -1]]})");
    const auto msg = message_of([&] { document_from_json(j); });
    EXPECT_NE(msg.find("ValidationError"), std::string::npos) << msg;
    EXPECT_NE(msg.find("matrix"), std::string::npos) << msg;
}

TEST(LoadModel, StationFieldsAreChecked)
{
    const json ok = json::parse(R"({"schema_version": 1, "kind": "station", "system": "mmm",
                                    "lambda": 2, "mu": 1, "servers": 3})");
    EXPECT_NO_THROW(document_from_json(ok));
    json bad = ok;
    bad["servers"] = 0;
    EXPECT_EQ(code_of([&] { document_from_json(bad); }), errc::validation_error);
    bad = ok;
    bad["system"] = "mdc";
    EXPECT_EQ(code_of([&] { document_from_json(bad); }), errc::schema_error);
    bad = ok;
    bad.erase("mu");
    EXPECT_EQ(code_of([&] { document_from_json(bad); }), errc::schema_error);
}

TEST(LoadModel, SweepBlockIsChecked)
{
    json j = closed_doc();
    j["sweep"] = {{"parameters", json::array({{{"name", "n"}, {"values", json::array()}, {"target", "population[0]"}}})}};
    EXPECT_EQ(code_of([&] { document_from_json(j); }), errc::schema_error);
    j["sweep"]["parameters"][0]["values"] = {1, 2};
    EXPECT_NO_THROW(document_from_json(j));
    j["sweep"]["parameters"][0].erase("target");
    EXPECT_EQ(code_of([&] { document_from_json(j); }), errc::schema_error);
}

// Running

TEST(Run, ReliabilityMtbfInYears)
{
    RunOptions o;
    o.until_absorbing = true;
    o.horizon_units = "years";
    const auto r = run("solve", load_model(models_dir + "/reliability.json"), o);
    EXPECT_NEAR(scalar(r, "mtta"), 2.8376, 0.5e-4);
}

TEST(Run, ReliabilityTimeUnitsScaleLinearly)
{
    RunOptions o;
    o.until_absorbing = true;
    const auto doc = load_model(models_dir + "/reliability.json");
    const double seconds = scalar(run("solve", doc, o), "mtta");
    o.horizon_units = "hours";
    EXPECT_NEAR(scalar(run("solve", doc, o), "mtta"), seconds / 3600.0, seconds * 1e-15);
}

TEST(Run, MarkovTransientAndSojournAgree)
{
    // Two-state CTMC with rates 1 and 2; the time-averaged sojourn over a
    // long horizon approaches the stationary vector (2/3, 1/3).
    const auto doc = document_from_json(
        json::parse(R"({"schema_version": 1, "kind": "markov-ctmc", "matrix": [[-1, 1], [2, -2]]})"));
    RunOptions o;
    o.horizon = 0.0;
    auto r = run("solve", doc, o);
    EXPECT_EQ(r.tables[0].values[0], (std::vector<double>{1.0, 0.0}));
    o.analysis = "sojourn";
    o.horizon = 2000.0;
    o.time_averaged = true;
    r = run("solve", doc, o);
    EXPECT_NEAR(r.tables[0].values[0][0], 2.0 / 3.0, 1e-3);
    o = {};
    o.analysis = "passage";
    r = run("solve", doc, o);
    EXPECT_NEAR(r.tables[0].values[0][1], 1.0, 1e-12);
    EXPECT_NEAR(r.tables[0].values[1][0], 0.5, 1e-12);
}

TEST(Run, DtmcHorizonMustBeWhole)
{
    const auto doc = document_from_json(
        json::parse(R"({"schema_version": 1, "kind": "markov-dtmc", "matrix": [[0.5, 0.5], [0.2, 0.8]]})"));
    RunOptions o;
    o.horizon = 2.5;
    EXPECT_EQ(code_of([&] { run("solve", doc, o); }), errc::invalid_parameter);
    o.horizon = 1.0;
    EXPECT_EQ(run("solve", doc, o).tables[0].values[0], (std::vector<double>{0.5, 0.5}));
}

TEST(Run, ComputeFarmThroughput)
{
    const auto r = run("solve", load_model(models_dir + "/compute_farm.json"), {});
    EXPECT_EQ(r.solver, "multiclass-mva");
    EXPECT_LE(std::abs(scalar(r, "throughput") - 0.0053793) / 0.0053793, 1e-4);
}

TEST(Run, AbaBoundsContainTheExactThroughput)
{
    const auto doc = load_model(models_dir + "/compute_farm.json");
    RunOptions o;
    o.method = "aba";
    const auto b = run("bounds", doc, o);
    const double x = scalar(run("solve", doc, {}), "throughput");
    EXPECT_LE(scalar(b, "throughput_lower"), x);
    EXPECT_GE(scalar(b, "throughput_upper"), x);
}

TEST(Run, MethodSelectsSolver)
{
    json j = closed_doc();
    j["think_time"][0] = 0.0;
    const auto doc = document_from_json(j);
    RunOptions o;
    const auto mva = run("solve", doc, o);
    o.method = "conv";
    const auto conv = run("solve", doc, o);
    o.method = "bs";
    const auto bs = run("solve", doc, o);
    EXPECT_EQ(mva.solver, "mva");
    EXPECT_EQ(conv.solver, "convolution");
    EXPECT_EQ(bs.solver, "bard-schweitzer");
    EXPECT_TRUE(bs.approximate);
    EXPECT_NEAR(scalar(mva, "throughput"), scalar(conv, "throughput"), 1e-12);
    EXPECT_NEAR(scalar(conv, "log_G"), std::log(scalar(conv, "G")), 1e-12);
}

TEST(Run, MultiServerCentersUseTheLoadDependentKernel)
{
    json j = closed_doc();
    j["stations"][0]["servers"] = 2;
    EXPECT_EQ(run("solve", document_from_json(j), {}).solver, "mva-ld");
}

TEST(Run, InapplicableCommandsAndMethods)
{
    const auto station = load_model(models_dir + "/station_mmm.json");
    EXPECT_EQ(code_of([&] { run("bounds", station, {}); }), errc::invalid_parameter);
    RunOptions o;
    o.method = "mva";
    EXPECT_EQ(code_of([&] { run("solve", station, o); }), errc::invalid_parameter);
    const auto closed = document_from_json(closed_doc());
    o.method = "aba";
    EXPECT_EQ(code_of([&] { run("solve", closed, o); }), errc::invalid_parameter);
    o.method = "mva";
    EXPECT_EQ(code_of([&] { run("bounds", closed, o); }), errc::invalid_parameter);
    EXPECT_EQ(code_of([&] { run_sweep(closed, {}); }), errc::schema_error);
}

TEST(Run, StationMarginalsAndScalars)
{
    const auto r = run("solve", load_model(models_dir + "/station_mmm.json"), {});
    const auto s = stations::mmm(4.0, 1.2, 5, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    EXPECT_EQ(scalar(r, "response_time"), s.response_time);
    EXPECT_EQ(r.tables[0].values[0], s.marginals);
    EXPECT_EQ(r.columns.size(), 11u);
}

TEST(Run, OpenNetworkOutput)
{
    const auto r = run("solve", document_from_json(open_doc(2.0)), {});
    EXPECT_EQ(r.solver, "jackson");
    // M/M/1 pair: 0.25/(1-0.5) + 2 * 0.1/(1-0.4).
    EXPECT_NEAR(scalar(r, "response_time"), 0.5 + 0.2 / 0.6, 1e-12);
}

// Sweeps

TEST(Sweep, OnePointMatchesSolve)
{
    json j = closed_doc();
    j["sweep"] = json::parse(R"({"parameters": [{"name": "s", "values": [0.3], "target": "stations[1].service[0]"}]})");
    const auto doc = document_from_json(j);
    const auto sweep = run_sweep(doc, {});
    const auto solve = run("solve", document_from_json(closed_doc()), {});
    ASSERT_EQ(sweep.rows.size(), 1u);
    EXPECT_EQ(sweep.rows[0].status, "ok");
    ASSERT_EQ(sweep.metrics.size(), solve.scalars.size());
    for (std::size_t k = 0; k < solve.scalars.size(); ++k) {
        EXPECT_EQ(sweep.metrics[k], solve.scalars[k].first);
        EXPECT_EQ(sweep.rows[0].values[k], solve.scalars[k].second);
    }
}

TEST(Sweep, IntegerTargetsAreRounded)
{
    json j = closed_doc();
    j["sweep"] = json::parse(R"({"parameters": [{"name": "n", "values": [2.4, 3.6, -2], "target": "population[0]"}]})");
    const auto r = run_sweep(document_from_json(j), {});
    json k = closed_doc();
    k["population"][0] = 4;
    EXPECT_EQ(r.rows[1].values[0], scalar(run("solve", document_from_json(k), {}), "throughput"));
    EXPECT_EQ(r.rows[2].status, "infeasible");
}

TEST(Sweep, ArrivalRateSweepFlagsUnstablePointsBeyondSaturation)
{
    json j = open_doc(1.0);
    j["sweep"] = json::parse(R"({"parameters": [{"name": "lambda", "from": 0.5, "to": 6, "points": 12,
                                                  "target": "arrival_rate[0]"}]})");
    const auto doc = document_from_json(j);
    RunOptions o;
    o.method = "aba";
    const double saturation = run("bounds", document_from_json(open_doc(0.5)), o).tables[0].values[0][4];
    EXPECT_DOUBLE_EQ(saturation, 4.0);
    const auto r = run_sweep(doc, {});
    for (const auto& row : r.rows) {
        const double lambda = row.coordinates[0];
        EXPECT_EQ(row.status, lambda < saturation ? "ok" : "unstable") << lambda;
    }
}

TEST(Sweep, PopulationMixRoundsAndLastClassTakesTheRest)
{
    auto j = json::parse(slurp(models_dir + "/compute_farm.json"));
    j["sweep"] = json::parse(R"({"parameters": [{"name": "b1", "values": [0.2, 0.9]}, {"name": "b2", "values": [0.3]}],
                                 "population_mix": {"total": 300, "fractions": ["b1", "b2"]}})");
    RunOptions o;
    o.method = "bs";
    const auto r = run_sweep(document_from_json(j), o);
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.rows[1].status, "infeasible");
    auto k = json::parse(slurp(models_dir + "/compute_farm.json"));
    k["population"] = {60, 90, 150};
    const double x = scalar(run("solve", document_from_json(k), o), "throughput");
    EXPECT_EQ(r.rows[0].values[0], x);
}

TEST(Sweep, MalformedTargetsAreSchemaErrors)
{
    for (const char* target : {"stations[9].service[0]", "stations[x]", "kind", "stations..service"}) {
        json j = closed_doc();
        j["sweep"] = {{"parameters", json::array({{{"name", "p"}, {"values", {1}}, {"target", target}}})}};
        EXPECT_EQ(code_of([&] { run_sweep(document_from_json(j), {}); }), errc::schema_error) << target;
    }
}

TEST(Sweep, OutputIsIndependentOfWorkerCount)
{
    auto j = json::parse(slurp(models_dir + "/population_mix.json"));
    j["sweep"]["parameters"][0]["points"] = 12;
    j["sweep"]["parameters"][1]["points"] = 12;
    const auto doc = document_from_json(j);
    RunOptions o;
    o.method = "bs";
    const auto one = render(run_sweep(doc, o), Format::csv);
    o.jobs = 8;
    EXPECT_EQ(render(run_sweep(doc, o), Format::csv), one);
}

// Rendering and round trips

TEST(Render, ComputeFarmCsvShape)
{
    const auto r = run("solve", load_model(models_dir + "/compute_farm.json"), {});
    const auto csv = render(r, Format::csv);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "metric,row,node1,node2,node3,node4,node5,node6,node7,total");
    std::map<std::string, int> rows;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9) << line;
        ++rows[line.substr(0, line.find(','))];
    }
    for (const char* m : {"U", "R", "Q", "X"})
        EXPECT_EQ(rows[m], 4) << m;
}

TEST(Render, CsvHasFullPrecision)
{
    const auto r = run("solve", load_model(models_dir + "/compute_farm.json"), {});
    const auto csv = render(r, Format::csv);
    const auto pos = csv.rfind("\nthroughput,");
    ASSERT_NE(pos, std::string::npos);
    const auto line = csv.substr(pos + 1, csv.find('\n', pos + 1) - pos - 1);
    const double printed = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_EQ(printed, scalar(r, "throughput"));
}

TEST(Render, TableUsesSixSignificantDigits)
{
    ResultDocument r;
    r.command = "solve";
    r.scalars = {{"x", 1.0 / 3.0}};
    const auto text = render(r, Format::table);
    EXPECT_NE(text.find("0.333333"), std::string::npos);
    EXPECT_EQ(text.find("0.3333333"), std::string::npos);
}

TEST(Render, EmptySweepIsHeaderOnly)
{
    ResultDocument r;
    r.command = "sweep";
    r.parameters = {"lambda"};
    r.metrics = {"throughput"};
    EXPECT_EQ(render(r, Format::csv), "lambda,status,throughput\n");
}

TEST(Render, CsvQuotesFieldsWithCommas)
{
    ResultDocument r;
    r.command = "solve";
    r.scalars = {{"a,b", 1.0}};
    EXPECT_NE(render(r, Format::csv).find("\"a,b\""), std::string::npos);
}

TEST(RoundTrip, SolveResultSurvivesJson)
{
    const auto r = run("solve", load_model(models_dir + "/compute_farm.json"), {});
    const auto back = result_from_json(json::parse(render(r, Format::json)));
    EXPECT_TRUE(back == r);
}

TEST(RoundTrip, SweepWithNonFiniteValuesSurvivesJson)
{
    RunOptions o;
    o.jobs = 3;
    const auto r = run_sweep(load_model(models_dir + "/open_lambda_sweep.json"), o);
    bool saw_nan = false;
    for (const auto& row : r.rows)
        saw_nan = saw_nan || std::isnan(row.values[0]);
    EXPECT_TRUE(saw_nan);
    const auto back = result_from_json(json::parse(render(r, Format::json)));
    EXPECT_TRUE(back == r);
}

TEST(RoundTrip, ApproximateResultKeepsIterationsAndResidual)
{
    RunOptions o;
    o.method = "bs";
    const auto r = run("solve", load_model(models_dir + "/compute_farm.json"), o);
    ASSERT_TRUE(r.iterations.has_value());
    ASSERT_TRUE(r.residual.has_value());
    const auto back = result_from_json(json::parse(to_json(r).dump()));
    EXPECT_TRUE(back == r);
    EXPECT_EQ(back.iterations, r.iterations);
}

TEST(RoundTrip, ExtremeValuesSurviveJson)
{
    ResultDocument r;
    r.command = "solve";
    r.scalars = {{"inf", std::numeric_limits<double>::infinity()},
                 {"ninf", -std::numeric_limits<double>::infinity()},
                 {"tiny", std::numeric_limits<double>::denorm_min()},
                 {"negzero", -0.0},
                 {"third", 1.0 / 3.0}};
    const auto back = result_from_json(json::parse(to_json(r).dump()));
    EXPECT_TRUE(back == r);
}

// The installed tool: exit codes and files.

TEST(Tool, SuccessWritesOutput)
{
    TempDir dir;
    const auto out = dir.file("farm.csv");
    const auto t = tool("solve " + models_dir + "/compute_farm.json --format csv --output " + out);
    EXPECT_EQ(t.status, 0);
    EXPECT_TRUE(t.out.empty());
    EXPECT_EQ(slurp(out).rfind("metric,row,node1", 0), 0u);
}

TEST(Tool, ReliabilityMtbf)
{
    const auto t = tool("solve " + models_dir + "/reliability.json --transient-until-absorbing --horizon-units years");
    EXPECT_EQ(t.status, 0);
    EXPECT_NE(t.out.find("2.83758"), std::string::npos) << t.out;
}

TEST(Tool, InvalidInputExitsWithOne)
{
    TempDir dir;
    json neg = closed_doc();
    neg["stations"][2]["service"][0] = -1;
    const std::vector<std::string> cases{
        "solve " + dir.write("empty.json", ""),
        "solve " + dir.write("bad.json", "{\"schema_version\": 1, \"kind\": \"station\"}"),
        "solve " + dir.write("neg.json", neg.dump()),
        "solve /nonexistent/model.json",
        "bounds " + models_dir + "/station_mmm.json",
        "solve " + models_dir + "/compute_farm.json --method conv",
        "solve " + models_dir + "/compute_farm.json --method fast",
        "solve " + models_dir + "/compute_farm.json --format xml",
        "solve " + models_dir + "/compute_farm.json --jobs 0",
        "solve " + models_dir + "/compute_farm.json --unknown-flag",
        "solve",
        "",
        "sweep " + models_dir + "/compute_farm.json",
        "solve " + models_dir + "/reliability.json --horizon-units fortnights",
    };
    for (const auto& c : cases)
        EXPECT_EQ(tool(c).status, 1) << c;
}

TEST(Tool, UnstableModelExitsWithTwo)
{
    TempDir dir;
    EXPECT_EQ(tool("solve " + dir.write("open.json", open_doc(5.0).dump())).status, 2);
    EXPECT_EQ(tool("bounds " + dir.write("open.json", open_doc(5.0).dump())).status, 2);
    const auto station = R"({"schema_version": 1, "kind": "station", "system": "mm1", "lambda": 3, "mu": 2})";
    EXPECT_EQ(tool("solve " + dir.write("mm1.json", station)).status, 2);
}

TEST(Tool, NumericFailureExitsWithThree)
{
    TempDir dir;
    // No convergence.
    EXPECT_EQ(tool("solve " + models_dir + "/compute_farm.json --method bs --max-iter 2").status, 3);
    // Reducible chain: no unique stationary vector.
    const auto reducible = R"({"schema_version": 1, "kind": "markov-ctmc", "matrix": [[0, 0], [0, 0]]})";
    EXPECT_EQ(tool("solve " + dir.write("red.json", reducible)).status, 3);
    // Lattice beyond the memory budget.
    auto big = json::parse(slurp(models_dir + "/compute_farm.json"));
    big["population"] = {5000, 5000, 5000};
    EXPECT_EQ(tool("solve " + dir.write("big.json", big.dump())).status, 3);
    // Every state reachable is required for passage times.
    const auto split = R"({"schema_version": 1, "kind": "markov-dtmc", "matrix": [[1, 0], [0.5, 0.5]]})";
    EXPECT_EQ(tool("solve " + dir.write("split.json", split) + " --analysis passage").status, 3);
}

TEST(Tool, SweepJobsGiveIdenticalBytes)
{
    TempDir dir;
    const auto a = dir.file("a.csv");
    const auto b = dir.file("b.csv");
    const auto model = models_dir + "/open_lambda_sweep.json";
    ASSERT_EQ(tool("sweep " + model + " --format csv --jobs 1 --output " + a).status, 0);
    ASSERT_EQ(tool("sweep " + model + " --format csv --jobs 8 --output " + b).status, 0);
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Tool, JsonOutputReloads)
{
    const auto t = tool("solve " + models_dir + "/central_server.json --method conv --format json");
    ASSERT_EQ(t.status, 0);
    const auto r = result_from_json(json::parse(t.out));
    EXPECT_EQ(r.solver, "convolution");
    EXPECT_EQ(r.model, json::parse(slurp(models_dir + "/central_server.json")));
}
