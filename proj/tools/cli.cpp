#include "cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qfact/clifford.hpp"
#include "qfact/eichler_monoid.hpp"
#include "qfact/error.hpp"
#include "qfact/io.hpp"
#include "qfact/verify.hpp"

namespace qfact::cli {

namespace {

using nlohmann::json;

class IoError : public Error {
public:
    using Error::Error;
};

struct Options {
    long prime = 0;
    std::vector<long> primes;
    int level = 0;
    int max_norm_val = 1;
    std::string matrix;
    std::string form;
    std::string format = "json";
    std::string emit_dot;
    std::size_t max_count = kDefaultMaxCount;
    bool find_nilpotent = false;
    int max_k = 5;
    int search_bound = 200;
    std::uint64_t seed = VerifyConfig{}.seed;
    int samples = 0;
    int threads = 1;
    std::vector<int> checks;
};

EichlerOrder make_order(const Options& o) {
    EichlerOrder R(Dvr(o.prime), o.level);
    R.require_non_hereditary();
    return R;
}

int cmd_atoms(const Options& o, std::ostream& out) {
    const auto R = make_order(o);
    if (o.max_norm_val < 1) throw DomainError("max-norm-val must be at least 1");
    const auto atoms = R.enumerate_atoms(o.max_norm_val);
    if (o.format == "csv") {
        out << io::atom_table_csv(atoms);
    } else {
        json j{{"p", o.prime},
               {"n", o.level},
               {"max_norm_val", o.max_norm_val},
               {"count", atoms.size()},
               {"atoms", io::atom_table_json(atoms)}};
        out << j.dump(2) << '\n';
    }
    return kOk;
}

int cmd_factor(const Options& o, std::ostream& out) {
    const auto R = make_order(o);
    const Mat2 A = io::parse_matrix(o.matrix);
    if (!R.contains(A)) throw DomainError("not an element of the order: " + A.str());
    if (A.det().is_zero()) throw DomainError("zero divisor: nr = 0");
    if (R.is_unit(A)) throw DomainError("unit: nothing to factor");
    const int v = R.norm_valuation(A).value();
    EichlerMonoid M(R, v);
    const auto s = enumerate_factorizations(M, A, o.max_count);
    const auto table = build_distance_table(M, s);
    LengthProfile prof = profile_of(M, s);

    if (!o.emit_dot.empty()) {
        std::ofstream dot(o.emit_dot);
        if (!dot) throw IoError("cannot open " + o.emit_dot + " for writing");
        dot << io::factorization_dot(M, s, table, prof.catenary);
        if (!dot) throw IoError("failed writing " + o.emit_dot);
    }
    if (o.format == "csv") {
        out << io::profile_csv(prof);
    } else {
        json j{{"p", o.prime},
               {"n", o.level},
               {"matrix", io::to_json(A)},
               {"norm_valuation", v},
               {"in_radical", R.in_jacobson(A)},
               {"profile", io::to_json(prof)},
               {"factorizations", io::factorizations_json(M, s)}};
        out << j.dump(2) << '\n';
    }
    return kOk;
}

/// "x0 + x1 i + x2 j + x3 k" with zero terms dropped, e.g. "j - 3k".
std::string element_str(const C0Element<Rational>& x) {
    static const char* names[] = {"", "i", "j", "k"};
    std::string s;
    for (int t = 0; t < 4; ++t) {
        const Rational& c = x.x[t];
        if (c.is_zero()) continue;
        const bool neg = c.sign() < 0;
        const Rational mag = neg ? -c : c;
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        if (t == 0 || mag != Rational(1)) s += mag.str();
        s += names[t];
    }
    return s.empty() ? "0" : s;
}

json residue_report(const Form& q, long p) {
    const Dvr dvr(p);
    const auto qbar = reduce_form(q, dvr);
    const auto brute = residue_radical(qbar);
    const auto preds = order_predicates(q, dvr);
    json j{{"p", p},
           {"residue_form", {qbar.a.v, qbar.b.v, qbar.c.v, qbar.u.v, qbar.v.v, qbar.w.v}},
           {"radical",
            {{"dimension", brute.radical_dimension()},
             {"basis", io::to_json(brute.radical())},
             {"nilpotency_index", brute.nilpotency_index}}},
           {"quotient", to_string(brute.quotient)},
           {"quotient_dimension", brute.quotient_dimension()},
           {"predicates",
            {{"local", preds.is_local},
             {"maximal_hint", preds.is_maximal_hint},
             {"eichler_hint", preds.is_eichler_hint}}}};
    try {
        j["classification"] = io::to_json(classify_residue(qbar));
    } catch (const NormalizationRequiredError& e) {
        j["classification"] = {{"normalization_required", true}, {"message", e.what()}};
    }
    return j;
}

json nilpotent_report(const Form& q, long p, const Options& o) {
    const CliffordOrder R(q, Dvr(p));
    if (!R.is_local()) throw DomainError("order is not local at p = " + std::to_string(p));
    const auto& A = R.algebra();
    const auto z = R.find_nilpotent_in_radical(o.search_bound);
    json atoms = json::array();
    for (int k = 2; k <= o.max_k; ++k) {
        const auto x = R.long_atom_family(z, k);
        const Rational nr = A.nr(x);
        atoms.push_back({{"k", k},
                         {"element", io::to_json(x)},
                         {"norm", io::to_json(nr)},
                         {"norm_valuation", R.dvr().valuation(nr).value()},
                         {"status", to_string(R.is_atom_local(x))}});
    }
    return {{"z", io::to_json(z)},
            {"z_str", element_str(z)},
            {"norm", io::to_json(A.nr(z))},
            {"trace", io::to_json(A.tr(z))},
            {"long_atoms", atoms}};
}

int cmd_clifford(const Options& o, std::ostream& out) {
    const Form q = io::parse_form(o.form);
    if (half_discriminant(q).is_zero()) throw DegenerateFormError();
    if (o.max_k < 2) throw DomainError("max-k must be at least 2");
    json reports = json::array();
    for (long p : o.primes) {
        json r = residue_report(q, p);
        if (o.find_nilpotent) r["nilpotent"] = nilpotent_report(q, p, o);
        reports.push_back(std::move(r));
    }
    json j{{"form", io::to_json(q)}, {"half_discriminant", io::to_json(half_discriminant(q))}, {"primes", reports}};
    out << j.dump(2) << '\n';
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    VerifyConfig cfg;
    cfg.seed = o.seed;
    if (o.samples > 0) cfg.samples = o.samples;
    cfg.threads = o.threads;
    cfg.checks = o.checks;
    const auto report = run_verification(cfg);
    out << report.to_json().dump(2) << '\n';
    return report.all_pass() ? kOk : kVerifyFailed;
}

void add_format(CLI::App* cmd, Options& o, bool csv) {
    auto* opt = cmd->add_option("--format", o.format, "Output format")->capture_default_str();
    opt->check(csv ? CLI::IsMember({"json", "csv"}) : CLI::IsMember({"json"}));
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Factorization invariants of local quaternion orders", "qfact"};
    app.require_subcommand(1);

    auto* atoms = app.add_subcommand("atoms", "List canonical atoms of an Eichler order");
    atoms->add_option("--prime", o.prime, "Residue characteristic p")->required();
    atoms->add_option("--level", o.level, "Eichler level n")->required();
    atoms->add_option("--max-norm-val", o.max_norm_val, "Largest v(nr) listed")->capture_default_str();
    add_format(atoms, o, true);

    auto* factor = app.add_subcommand("factor", "Factorizations and length profile of a matrix");
    factor->add_option("--prime", o.prime, "Residue characteristic p")->required();
    factor->add_option("--level", o.level, "Eichler level n")->required();
    factor->add_option("--matrix", o.matrix, "a,b_raw,c,d or [[a,b_raw],[c,d]]")->required();
    factor->add_option("--emit-dot", o.emit_dot, "Write the distance graph in DOT format to this file");
    factor->add_option("--max-count", o.max_count, "Abort beyond this many factorizations")->capture_default_str();
    factor->add_option("--threads", o.threads, "Thread cap")->capture_default_str();
    add_format(factor, o, true);

    auto* clifford = app.add_subcommand("clifford", "Radical and atoms of an even Clifford order");
    clifford->add_option("--prime", o.primes, "Residue characteristic(s)")->required();
    clifford->add_option("--form", o.form, "Coefficients a,b,c,u,v,w")->required();
    clifford->add_flag("--find-nilpotent", o.find_nilpotent, "Search a nilpotent z in J \\ J^2 and long atoms");
    clifford->add_option("--max-k", o.max_k, "Largest k in the atom family p^k + z")->capture_default_str();
    clifford->add_option("--search-bound", o.search_bound, "Box size of the isotropic vector search")
        ->capture_default_str();
    add_format(clifford, o, false);

    auto* verify = app.add_subcommand("verify", "Run the acceptance checks and print a JSON report");
    verify->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();
    verify->add_option("--samples", o.samples, "Override the per-instance sample counts");
    verify->add_option("--threads", o.threads, "Checks run in parallel")->capture_default_str();
    verify->add_option("--checks", o.checks, "Subset of check ids")->delimiter(',');
    add_format(verify, o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }

    try {
        if (*atoms) return cmd_atoms(o, out);
        if (*factor) return cmd_factor(o, out);
        if (*clifford) return cmd_clifford(o, out);
        return cmd_verify(o, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const OverflowError& e) {
        err << "error: " << e.what() << '\n';
        return kOverflow;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

} // namespace qfact::cli
