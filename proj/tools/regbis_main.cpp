#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "regbis/errors.hpp"
#include "regbis/model_format.hpp"
#include "regbis/ops.hpp"
#include "regbis/report.hpp"

using namespace regbis;

namespace {

fmt::Bundle load_bundle(const std::string& path) {
    return fmt::resolve(fmt::parse_model_file(path));
}

Mta load_relation(const std::string& path, const std::string& name) {
    auto f = fmt::parse_model_file(path);
    if (f.automata.empty()) throw invalid_input_error("relation file defines no automaton");
    const fmt::ModelFile::AutomatonDef* def = nullptr;
    if (name.empty()) {
        if (f.automata.size() != 1)
            throw invalid_input_error(
                "relation file defines several automata; pick one with --relation-name");
        def = &f.automata[0];
    } else {
        def = f.find(name);
        if (!def) throw invalid_input_error("no automaton named '" + name + "' in the file");
    }
    if (def->aut.alphabet.track_count() != 2)
        throw invalid_input_error("a candidate relation needs exactly two tracks");
    return determinize_minimize(def->aut);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"regbis: regular probabilistic-bisimulation proofs for parameterized systems"};
    app.require_subcommand(1);

    driver::RunOptions opts;
    app.add_option("--max-cells", opts.max_cells, "observation table cell limit");
    app.add_option("--max-queries", opts.max_queries, "equivalence query limit");
    app.add_option("--jobs", opts.jobs, "worker threads for teacher queries");
    app.add_option("--dot-out", opts.dot_out, "directory for DOT exports");
    app.add_option("--log", opts.log_path, "query/response log file");

    std::string model_path, relation_path, relation_name, formula_path, out_path, corpus_sub;
    size_t length = 0;

    auto* validate_cmd = app.add_subcommand("validate", "check model well-formedness");
    validate_cmd->add_option("model", model_path)->required();

    auto* inst_cmd = app.add_subcommand("instantiate", "materialize a finite instance");
    inst_cmd->add_option("model", model_path)->required();
    inst_cmd->add_option("--length", length, "configuration length")->required();

    auto* check_cmd = app.add_subcommand("check", "check a candidate relation");
    check_cmd->add_option("model", model_path)->required();
    check_cmd->add_option("--relation", relation_path, "model file holding the relation")
        ->required();
    check_cmd->add_option("--relation-name", relation_name, "automaton name in the file");

    auto* learn_cmd = app.add_subcommand("learn", "synthesize a bisimulation");
    learn_cmd->add_option("model", model_path)->required();

    auto* verify_cmd = app.add_subcommand("verify", "synthesize and check the declared property");
    verify_cmd->add_option("model", model_path)->required();

    auto* corpus_cmd = app.add_subcommand("corpus", "work with a bundled case study");
    std::string corpus_name;
    corpus_cmd->add_option("name", corpus_name)->required();
    corpus_cmd->add_option("command", corpus_sub,
                           "verify | learn | validate | export | oracle")
        ->required();
    corpus_cmd->add_option("--out", out_path, "output path for export");
    corpus_cmd->add_option("--length", length, "instance length for oracle runs");

    auto* query_cmd = app.add_subcommand("query", "evaluate a first-order sentence");
    query_cmd->add_option("model", model_path)->required();
    query_cmd->add_option("--formula", formula_path, "file with one s-expression sentence")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        driver::RunReport report;
        if (*validate_cmd) {
            report = driver::do_validate(load_bundle(model_path));
        } else if (*inst_cmd) {
            report = driver::do_instantiate(load_bundle(model_path), length);
        } else if (*check_cmd) {
            report = driver::do_check(load_bundle(model_path),
                                      load_relation(relation_path, relation_name), opts);
        } else if (*learn_cmd) {
            report = driver::do_learn(load_bundle(model_path), opts);
        } else if (*verify_cmd) {
            report = driver::do_verify(load_bundle(model_path), opts);
        } else if (*corpus_cmd) {
            auto cm = corpus::load(corpus_name);
            auto bundle = fmt::bundle_of(cm);
            if (corpus_sub == "verify") {
                report = driver::do_verify(bundle, opts);
            } else if (corpus_sub == "learn") {
                report = driver::do_learn(bundle, opts);
            } else if (corpus_sub == "validate") {
                report = driver::do_validate(bundle);
            } else if (corpus_sub == "export") {
                std::string text = fmt::print_model(fmt::to_model_file(bundle));
                if (out_path.empty()) {
                    std::cout << text;
                } else {
                    std::ofstream out(out_path);
                    out << text;
                    report.note("wrote " + out_path);
                }
                report.set("exported", corpus_name);
            } else if (corpus_sub == "oracle") {
                size_t len = length;
                if (len == 0) {
                    auto lens = corpus::instance_lengths(cm, 8);
                    if (lens.empty()) throw invalid_input_error("no populated instance length");
                    len = lens.front();
                }
                corpus::OracleOutcome oc;
                if (cm.property == corpus::Property::kAnonymity) {
                    size_t cells = len - 1;
                    oc = corpus::anonymity_oracle(cm, len, 2 * cells + 2);
                } else {
                    oc = corpus::uniformity_oracle(cm, len);
                }
                for (auto& [k, v] : oc.lines) report.set(k, v);
                report.set("oracle_ok", oc.ok ? "true" : "false");
                report.exit_code = oc.ok ? 0 : 1;
                if (!oc.ok) report.note(oc.detail);
            } else {
                throw invalid_input_error("unknown corpus command: " + corpus_sub);
            }
        } else if (*query_cmd) {
            report = driver::do_query(load_bundle(model_path), slurp(formula_path));
        }
        report.print(std::cout);
        return report.exit_code;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const resource_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
