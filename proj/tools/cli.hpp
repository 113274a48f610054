#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mwk/correspondences.hpp"

namespace mwk::cli {

struct Command {
    std::string verb;
    FieldPtr field;
    std::optional<int> degree;
    bool milnor = false;  // KM(...) annotation
    std::vector<std::string> exprs;
    std::string at;
    std::vector<std::string> ext;
    std::string kind = "cohomological";  // transfer flavour
    std::string suite;
    std::string suite_dir;
    bool json = false;
    bool once = false;  // reduce-cycle: a single pass
};

struct Report {
    std::string status = "ok";  // ok, distinct, unknown, error
    std::string result;
    nlohmann::json trace = nlohmann::json::array();
    double ms = 0;

    int exit_code() const;
    nlohmann::json to_json() const;
};

/* argv without the program name. */
Command parse_args(const std::vector<std::string>& args);
Command parse_line(const std::string& text);
Report execute(const Command& c);
/* parse + execute; errors become status "error". */
Report run(const std::vector<std::string>& args);
std::string render(const Report& r, bool json);

/* Shell-like splitting with double quotes, used by the suite files. */
std::vector<std::string> split_command(const std::string& line);

/* Expression grammar: sums and differences of products of integers, eta,
 * eta^k, h, [a,b,...], <a,b,...> (a diagonal form), {a,b,...} and
 * parenthesized expressions; juxtaposition multiplies. */
MWExpr parse_mw(const FieldPtr& F, const std::string& text, std::optional<int> degree);
MilnorExpr parse_milnor(const FieldPtr& F, const std::string& text, std::optional<int> degree);
Correspondence parse_cycle(const std::string& text);

/* Suite files live in this directory unless --suite-dir or MWK_SUITES
 * says otherwise. */
std::string default_suite_dir();
std::vector<std::string> suite_names(const std::string& dir);

}  // namespace mwk::cli
