#include <iostream>

#include "cli.hpp"

namespace {

const char* kUsage = R"(usage: mwk <verb> [options] <expr>... [@ KMW(n, FIELD) | @ KM(n, FIELD)]

verbs:
  normalize EXPR [EXPECTED]       normal form; with EXPECTED, compare
  equal A B                       decide A = B
  residue --at V EXPR [EXPECTED]  residue at a prime of Q, a monic irreducible or inf
  specialize --at V EXPR [EXPECTED]
  transfer --ext POLY EXPR [EXPECTED]
                                  EXPR lives over FIELD[x]/(POLY); --ext repeats for towers;
                                  --kind geometric|cohomological (default cohomological)
  phi EXPR                        the cycle of a class
  theta CYCLE [EXPECTED]          the class of a cycle
  reduce-cycle CYCLE [EXPECTED]   reduce to rational points (--once for one pass)
  verify [NAME|all]               run a suite from the suites directory

options: --field F, --json, --suite NAME, --suite-dir DIR

expressions: integers, eta, eta^k, h, eps, [a,b], <a,b>, {a,b}, sums, products, parentheses
cycles: cycle{ point(TOWER; x1, x2; FORM) + ... } : FIELD -> Gm^q
exit status: 0 ok, 1 distinct or failed check, 2 error or undecided
)";

}  // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    for (auto& a : args)
        if (a == "--help" || a == "-h") {
            std::cout << kUsage;
            return 0;
        }
    bool json = false;
    for (auto& a : args) json = json || a == "--json";
    mwk::cli::Report r = mwk::cli::run(args);
    (r.status == "error" && !json ? std::cerr : std::cout) << mwk::cli::render(r, json) << "\n";
    return r.exit_code();
}
