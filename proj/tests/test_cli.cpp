#include "sepprob/cli.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sepprob;
using sepprob::testing::q;
using json = nlohmann::json;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

json load_schema(const std::string& name)
{
    std::ifstream f(std::string(SEPPROB_SCHEMA_DIR) + "/" + name);
    if (!f)
        throw std::runtime_error("missing schema " + name);
    return json::parse(f);
}

bool type_matches(const json& v, const std::string& t)
{
    if (t == "object")
        return v.is_object();
    if (t == "array")
        return v.is_array();
    if (t == "string")
        return v.is_string();
    if (t == "integer")
        return v.is_number_integer();
    if (t == "number")
        return v.is_number();
    if (t == "boolean")
        return v.is_boolean();
    if (t == "null")
        return v.is_null();
    return false;
}

/// Subset of JSON Schema: type, required, properties, items.
void validate(const json& v, const json& schema, const std::string& path, std::vector<std::string>& errors)
{
    if (schema.contains("type")) {
        const json& t = schema["type"];
        bool ok = false;
        if (t.is_string())
            ok = type_matches(v, t.get<std::string>());
        else
            for (const auto& x : t)
                ok = ok || type_matches(v, x.get<std::string>());
        if (!ok) {
            errors.push_back(path + ": type mismatch, expected " + t.dump());
            return;
        }
    }
    if (v.is_object()) {
        if (schema.contains("required"))
            for (const auto& r : schema["required"])
                if (!v.contains(r.get<std::string>()))
                    errors.push_back(path + ": missing " + r.get<std::string>());
        if (schema.contains("properties"))
            for (const auto& [key, sub] : schema["properties"].items())
                if (v.contains(key))
                    validate(v[key], sub, path + "." + key, errors);
    }
    if (v.is_array() && schema.contains("items"))
        for (std::size_t i = 0; i < v.size(); ++i)
            validate(v[i], schema["items"], path + "[" + std::to_string(i) + "]", errors);
}

void expect_valid(const std::string& text, const std::string& schema_name)
{
    json v = json::parse(text);
    std::vector<std::string> errors;
    validate(v, load_schema(schema_name), "$", errors);
    for (const auto& e : errors)
        ADD_FAILURE() << schema_name << " " << e;
}

/// RFC 4180 reader for test purposes.
std::vector<std::vector<std::string>> parse_csv(const std::string& s)
{
    std::vector<std::vector<std::string>> rows(1);
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (quoted) {
            if (c == '"' && i + 1 < s.size() && s[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            rows.back().push_back(field);
            field.clear();
        } else if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') {
            rows.back().push_back(field);
            field.clear();
            rows.emplace_back();
            ++i;
        } else {
            field += c;
        }
    }
    if (rows.back().empty())
        rows.pop_back();
    return rows;
}

}  // namespace

TEST(Ranges, Rational)
{
    EXPECT_EQ(parse_rational_range("1..3"), (std::vector<Rational>{1, 2, 3}));
    EXPECT_EQ(parse_rational_range("0..1:1/4"), (std::vector<Rational>{0, q(1, 4), q(1, 2), q(3, 4), 1}));
    EXPECT_EQ(parse_rational_range("-1/2"), std::vector<Rational>{q(-1, 2)});
    EXPECT_EQ(parse_rational_range("-2..-1"), (std::vector<Rational>{-2, -1}));
    EXPECT_THROW(parse_rational_range("3..1"), DomainError);
    EXPECT_THROW(parse_rational_range("1..3:0"), DomainError);
    EXPECT_EQ(parse_integer_range("-1..2"), (std::vector<long>{-1, 0, 1, 2}));
    EXPECT_THROW(parse_integer_range("0..1:1/2"), DomainError);
    EXPECT_EQ(parse_rational_list("1/4,0.7,2"), (std::vector<Rational>{q(1, 4), q(7, 10), 2}));
    EXPECT_THROW(parse_rational_list(""), DomainError);
}

TEST(Csv, Quoting)
{
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
    EXPECT_EQ(csv_row({"x", "y,z"}), "x,\"y,z\"\r\n");
    auto rows = parse_csv(csv_row({"a", "b,\"c\"", ""}) + csv_row({"1", "2", "3"}));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b,\"c\"", ""}));
}

TEST(OlsFit, ExactLine)
{
    FitReport f = ols_fit({{0, 1}, {1, 3}, {2, 5}, {3, 7}});
    EXPECT_NEAR(f.slope, 2, 1e-12);
    EXPECT_NEAR(f.intercept, 1, 1e-12);
    EXPECT_NEAR(f.r_squared, 1, 1e-12);
}

TEST(Eval, ExactValues)
{
    CliRun r = run({"eval", "q", "--k", "0", "--alpha", "1"});
    EXPECT_EQ(r.code, exit_ok);
    EXPECT_EQ(r.out, "4/33\n");
    EXPECT_EQ(run({"eval", "p", "--k", "1", "--alpha", "1"}).out, "61/143\n");
    EXPECT_EQ(run({"eval", "complement", "--k", "1", "--alpha", "1"}).out, "7/26\n");
    EXPECT_EQ(run({"eval", "q", "--k", "-1", "--alpha", "1"}).out, "1/14\n");
}

TEST(Eval, NumericValue)
{
    CliRun r = run({"eval", "master", "--k", "0", "--alpha", "1/4", "--prec", "96"});
    ASSERT_EQ(r.code, exit_ok);
    EXPECT_EQ(r.out.rfind("0.", 0), 0u);
}

TEST(Eval, JsonMatchesSchema)
{
    CliRun r = run({"eval", "q", "--k", "1", "--alpha", "1/4", "--format", "json"});
    ASSERT_EQ(r.code, exit_ok);
    expect_valid(r.out, "sepvalue.schema.json");
    json j = json::parse(r.out);
    EXPECT_EQ(j["k"], 1);
    EXPECT_EQ(j["alpha"], "1/4");
    CliRun e = run({"eval", "q", "--k", "0", "--alpha", "1", "--format", "json"});
    expect_valid(e.out, "sepvalue.schema.json");
    EXPECT_EQ(json::parse(e.out)["exact"], "4/33");
}

TEST(ExitCodes, DomainIoAndParse)
{
    CliRun neg = run({"eval", "q", "--k", "0", "--alpha", "-1"});
    EXPECT_EQ(neg.code, exit_domain);
    EXPECT_FALSE(neg.err.empty());
    EXPECT_EQ(run({"eval", "q", "--out", "/nonexistent/dir/x.txt"}).code, exit_io);
    EXPECT_EQ(run({"eval", "q", "--bogus"}).code, exit_domain);
    EXPECT_EQ(run({"eval", "nothing"}).code, exit_domain);
    EXPECT_EQ(run({}).code, exit_domain);
    EXPECT_EQ(run({"eval", "q", "--prec", "8"}).code, exit_domain);
    EXPECT_EQ(run({"mc", "--samples", "100"}).code, exit_domain);
}

TEST(Table, CsvHeaderAndRows)
{
    CliRun r = run({"table", "q", "--k-range", "0..1", "--alpha-range", "1..2"});
    ASSERT_EQ(r.code, exit_ok);
    auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "alpha", "value", "log_value", "mode"}));
    EXPECT_EQ(rows[1][2], "4/33");
    EXPECT_EQ(rows[2][2], "13/323");
    EXPECT_EQ(rows[4][2], "2056/37145");
    EXPECT_EQ(rows[1][4], "exact");
}

TEST(Table, JsonMatchesSchema)
{
    CliRun r = run({"table", "q", "--k-range", "-1..1", "--alpha-range", "1/4..1:1/4", "--format", "json"});
    ASSERT_EQ(r.code, exit_ok);
    expect_valid(r.out, "table.schema.json");
    EXPECT_EQ(json::parse(r.out).size(), 12u);
}

TEST(Table, WritesFile)
{
    auto path = std::filesystem::temp_directory_path() / "sepprob_table_test.csv";
    CliRun r = run({"table", "p", "--k-range", "0..2", "--alpha-range", "1", "--out", path.string()});
    ASSERT_EQ(r.code, exit_ok);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    EXPECT_EQ(parse_csv(s.str()).size(), 4u);
    std::filesystem::remove(path);
}

TEST(Asymptotics, LogLogSlope)
{
    CliRun r = run({"asymptotics", "--mode", "loglog-p", "--alpha", "1/2", "--points", "60"});
    ASSERT_EQ(r.code, exit_ok);
    expect_valid(r.out, "asymptotics.schema.json");
    json j = json::parse(r.out);
    EXPECT_EQ(j["fit"]["points"].size(), 60u);
    EXPECT_LT(j["fit"]["slope"].get<double>(), -0.5);
    EXPECT_GT(j["fit"]["slope"].get<double>(), -0.6);
}

TEST(Asymptotics, RatioModes)
{
    CliRun a = run({"asymptotics", "--mode", "q-alpha-ratio", "--k-range", "0..1"});
    ASSERT_EQ(a.code, exit_ok);
    expect_valid(a.out, "asymptotics.schema.json");
    json j = json::parse(a.out);
    EXPECT_EQ(j["ratios"][0]["ratio"].get<std::string>().substr(0, 8), "0.419801");
    CliRun p = run({"asymptotics", "--mode", "p-log-ratio", "--points", "5"});
    ASSERT_EQ(p.code, exit_ok);
    expect_valid(p.out, "asymptotics.schema.json");
    EXPECT_EQ(json::parse(p.out)["ratios"].size(), 5u);
    CliRun s = run({"asymptotics", "--mode", "q-alpha-slope", "--alpha-range", "1..101:20"});
    ASSERT_EQ(s.code, exit_ok);
    expect_valid(s.out, "asymptotics.schema.json");
    EXPECT_EQ(run({"asymptotics", "--mode", "other"}).code, exit_domain);
}

TEST(Mc, JsonAndCsv)
{
    CliRun r = run({"mc", "--k", "0", "--alpha", "complex", "--samples", "10000", "--seed", "5", "--threads", "2"});
    ASSERT_EQ(r.code, exit_ok);
    expect_valid(r.out, "mcresult.schema.json");
    json j = json::parse(r.out);
    EXPECT_EQ(j["n_samples"], 10000);
    EXPECT_EQ(j["alpha"], "1");
    CliRun single = run({"mc", "--k", "0", "--alpha", "1", "--samples", "10000", "--seed", "5"});
    EXPECT_EQ(json::parse(single.out)["count_q"], j["count_q"]);

    auto path = std::filesystem::temp_directory_path() / "sepprob_mc_test.csv";
    auto dump = std::filesystem::temp_directory_path() / "sepprob_mc_test.bin";
    CliRun c = run({"mc", "--alpha", "1/2", "--samples", "10000", "--out", path.string(), "--dump", dump.string()});
    ASSERT_EQ(c.code, exit_ok);
    std::ifstream f(path, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    auto rows = parse_csv(s.str());
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][0], "k");
    EXPECT_EQ(rows[1][1], "real");
    EXPECT_EQ(std::filesystem::file_size(dump), 10000u * 2 * sizeof(double));
    std::filesystem::remove(path);
    std::filesystem::remove(dump);
}

TEST(Reconstruct, JsonMatchesSchema)
{
    CliRun r = run({"reconstruct", "--kind", "diff", "--k", "0", "--alpha", "1", "--moments", "16"});
    ASSERT_EQ(r.code, exit_ok);
    expect_valid(r.out, "reconstruction.schema.json");
    json j = json::parse(r.out);
    EXPECT_EQ(j["total_mass"], "1");
    EXPECT_EQ(j["legendre_coeffs"].size(), 17u);
    EXPECT_EQ(j["support"][1], "1/432");
    EXPECT_EQ(run({"reconstruct", "--moments", "8", "--deg", "9"}).code, exit_domain);
    EXPECT_EQ(run({"reconstruct", "--kind", "ptdet", "--k", "1"}).code, exit_domain);
    EXPECT_EQ(run({"reconstruct", "--support", "0"}).code, exit_domain);
}

TEST(Fitrec, FoundAndStructure)
{
    CliRun r = run({"fitrec", "--k", "1", "--alpha-max", "40", "--format", "json"});
    ASSERT_EQ(r.code, exit_ok);
    expect_valid(r.out, "fitrec.schema.json");
    json j = json::parse(r.out);
    EXPECT_TRUE(j["found"].get<bool>());
    EXPECT_TRUE(j["round_trip"].get<bool>());
    EXPECT_EQ(j["degrees"], json::array({18, 6, 6}));
    EXPECT_TRUE(j["structure"]["p0_divisible"].get<bool>());
    EXPECT_TRUE(j["structure"]["failures"].empty());
}

TEST(Fitrec, TooShortIsDomainError)
{
    EXPECT_EQ(run({"fitrec", "--k", "0", "--alpha-max", "40", "--deg", "12"}).code, exit_domain);
}

TEST(Check, IdentityJson)
{
    CliRun r = run({"check", "identity", "--alphas", "1/4,1,7/10"});
    ASSERT_EQ(r.code, exit_ok);
    expect_valid(r.out, "identity.schema.json");
    for (const auto& row : json::parse(r.out))
        EXPECT_TRUE(row["holds"].get<bool>()) << row["alpha"];
}

TEST(Check, RootsJson)
{
    CliRun r = run({"check", "roots", "--alpha-range", "0..2:1/2"});
    ASSERT_EQ(r.code, exit_ok);
    expect_valid(r.out, "roots.schema.json");
    json j = json::parse(r.out);
    ASSERT_EQ(j.size(), 5u);
    EXPECT_EQ(j[2]["count"], "1");
    EXPECT_EQ(j[4]["count"], "2");
    EXPECT_TRUE(j[1]["complex_parity"].get<bool>());
    EXPECT_EQ(run({"check", "other"}).code, exit_domain);
}

TEST(Help, ExitsCleanly)
{
    CliRun r = run({"--help"});
    EXPECT_EQ(r.code, exit_ok);
    EXPECT_NE(r.out.find("eval"), std::string::npos);
}
