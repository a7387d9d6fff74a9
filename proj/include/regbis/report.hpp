#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "regbis/model_format.hpp"

namespace regbis::driver {

// Exit-code contract: 0 proved/ok, 1 refuted/counterexample, 2 unknown or
// not applicable, 3 usage or resource error.
struct RunReport {
    int exit_code = 0;
    std::vector<std::string> human;                           // free-form lines
    std::vector<std::pair<std::string, std::string>> kv;      // machine block
    std::vector<std::string> timing;                          // human only

    void set(const std::string& k, const std::string& v) { kv.emplace_back(k, v); }
    void note(std::string line) { human.push_back(std::move(line)); }
    void print(std::ostream& os) const;
};

struct RunOptions {
    size_t max_cells = 1'000'000;
    size_t max_queries = 200;
    size_t jobs = 1;
    std::string dot_out;   // directory for DOT exports
    std::string log_path;  // query/response log
    size_t oracle_length_cap = 8;  // corpus oracle instance bound in reports
};

RunReport do_validate(const fmt::Bundle& b);
RunReport do_instantiate(const fmt::Bundle& b, size_t length);
RunReport do_check(const fmt::Bundle& b, const Mta& relation, const RunOptions& opts);
RunReport do_learn(const fmt::Bundle& b, const RunOptions& opts);
RunReport do_verify(const fmt::Bundle& b, const RunOptions& opts);
RunReport do_query(const fmt::Bundle& b, const std::string& formula_text);

}  // namespace regbis::driver
