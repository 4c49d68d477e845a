#include "cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "ejnet/routing.hpp"
#include "ejnet/simlab.hpp"
#include "ejnet/spantree.hpp"

namespace ejst {

using namespace ejnet;
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string a = "";
    i64 b = 0;
    int dims = 1;
    std::string scheme;
    int tree = 0;
    std::string src, dst;
    std::vector<std::string> faults;
    std::vector<std::string> fault_links;
    int link_count = 0;  // simulate: faulty links per set
    std::string f = "0..5";
    bool exhaustive = false;
    std::uint64_t samples = 0;
    std::uint64_t seed = Policy{}.seed;
    std::string format = "text";
    std::string out;
    std::string reading;
    std::size_t log_cap = 0;
};

i64 parse_int(const std::string& s, const char* what) {
    i64 v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw UsageError(std::string("bad ") + what + ": '" + s + "'");
    return v;
}

// "3", "0..5"; "" or a descending range is empty
std::vector<i64> parse_range(const std::string& s, const char* what) {
    std::vector<i64> out;
    if (s.empty()) return out;
    auto dots = s.find("..");
    if (dots == std::string::npos) return {parse_int(s, what)};
    i64 lo = parse_int(s.substr(0, dots), what), hi = parse_int(s.substr(dots + 2), what);
    for (i64 v = lo; v <= hi; ++v) out.push_back(v);
    return out;
}

i64 single_a(const Config& c) {
    if (c.a.empty()) throw UsageError("--a is required");
    i64 a = parse_int(c.a, "--a");
    if (a < 1) throw UsageError("generator needs a >= 1, got " + c.a);
    if (c.b != 0 && c.b != a + 1) throw UsageError("dense generator needs b = a+1");
    if (c.dims < 1) throw UsageError("--dims must be >= 1");
    return a;
}

Scheme scheme_or(const Config& c, Scheme def) {
    if (c.scheme.empty()) return def;
    auto s = parse_scheme(c.scheme);
    if (!s) throw UsageError("unknown scheme '" + c.scheme + "' (ednist|ist)");
    return *s;
}

EJInt parse_addr(const std::string& s, const char* what) {
    auto v = parse_ej(s);
    if (!v) throw UsageError(std::string("bad ") + what + " address '" + s + "' (x,y or x,y,z)");
    return *v;
}

FaultSet parse_faults(const Config& c, const DenseEJ& net) {
    FaultSet fs;
    for (const auto& f : c.faults) fs.nodes.insert(net.id_of_any(parse_addr(f, "fault")));
    for (const auto& l : c.fault_links) {
        auto colon = l.find(':');
        if (colon == std::string::npos) throw UsageError("fault link '" + l + "' must be x,y:x',y'");
        NodeId u = net.id_of_any(parse_addr(l.substr(0, colon), "fault link"));
        NodeId v = net.id_of_any(parse_addr(l.substr(colon + 1), "fault link"));
        if (net.direction_to(u, v) < 0) throw UsageError("fault link '" + l + "' joins non-adjacent nodes");
        fs.add_link(u, v);
    }
    return fs;
}

void check_format(const Config& c, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed)
        if (c.format == f) return;
    throw UsageError("unsupported --format '" + c.format + "' for this command");
}

// Writes to --out if given, else to out.
void emit(const Config& c, std::ostream& out, const std::string& text) {
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f || !(f << text)) throw UsageError("cannot write " + c.out);
}

std::string reading_for(const Config& c, const char* def) {
    if (!c.reading.empty()) return c.reading;
    return def;
}

int cmd_verify(const Config& c, std::ostream& out) {
    check_format(c, {"text", "json"});
    const i64 a = single_a(c);
    std::vector<Scheme> schemes;
    if (c.scheme.empty()) schemes = {Scheme::EDNIST, Scheme::IST};
    else schemes = {scheme_or(c, Scheme::IST)};

    bool ok = true;
    std::string text;
    nlohmann::json js = nlohmann::json::array();
    for (Scheme s : schemes) {
        Report rep;
        if (c.dims == 1) {
            rep = verify_report(s, a, reading_for(c, "resolved"));
        } else {
            auto net = std::make_shared<const ProductNet>(ProductNet::uniform(a, c.dims));
            auto trees = build_product_trees(s, net, reading_for(c, "resolved"));
            rep.subject = std::string(scheme_name(s)) + " a=" + std::to_string(a) + " dims=" + std::to_string(c.dims) +
                          " N=" + std::to_string(net->size()) + " degree=" + std::to_string(net->degree()) +
                          " trees=" + std::to_string(trees.size());
            Check span{"product-spanning", true, 0, {}};
            for (const auto& t : trees) {
                Check one = verify_product_spanning(t);
                if (!one.pass && span.violations == 0) span.first = "tree " + std::to_string(t.t) + ": " + one.first;
                span.violations += one.violations;
                span.pass = span.pass && one.pass;
            }
            rep.checks.push_back(span);
            if (s == Scheme::EDNIST) rep.checks.push_back(verify_product_edge_disjoint(trees));
        }
        ok = ok && rep.pass();
        text += rep.text();
        nlohmann::json j;
        j["subject"] = rep.subject;
        j["pass"] = rep.pass();
        for (const auto& ch : rep.checks)
            j["checks"].push_back({{"name", ch.name}, {"pass", ch.pass}, {"violations", ch.violations}, {"first", ch.first}});
        j["notes"] = rep.notes;
        js.push_back(j);
    }
    emit(c, out, c.format == "json" ? js.dump(2) + "\n" : text);
    return ok ? kOk : kFailed;
}

int cmd_trees(const Config& c, std::ostream& out) {
    check_format(c, {"text", "json", "dot"});
    const i64 a = single_a(c);
    if (c.dims != 1) throw UsageError("trees supports --dims 1 only; use export for product trees");
    const Scheme s = scheme_or(c, Scheme::IST);
    TreeSet set = trees_for(s, a, reading_for(c, "resolved"));
    if (c.tree < 0 || c.tree > static_cast<int>(set.trees.size()))
        throw UsageError("--tree must be in 1.." + std::to_string(set.trees.size()));
    std::string text;
    for (const auto& tr : set.trees) {
        if (c.tree && tr.t != c.tree) continue;
        if (c.format == "json") text += tree_json(tr);
        else if (c.format == "dot") text += tree_dot(tr);
        else {
            const DenseEJ& net = *tr.net;
            text += "tree " + std::to_string(tr.t) + " depth " + std::to_string(tr.depth()) + " interpretation " +
                    tr.interpretation_id + "\n";
            for (NodeId v = 1; v < net.size(); ++v) {
                NodeId p = tr.parent[static_cast<size_t>(v)];
                text += "  " + to_string(net.addr(v)) + " -> " + (p == kNoNode ? "none" : to_string(net.addr(p))) +
                        " via " + std::string(dir_name(Direction(tr.parent_dir[static_cast<size_t>(v)]))) + " depth " +
                        std::to_string(tr.depth_of(v)) + " word " + set.path_word(tr.t, net.addr(v)).str() + "\n";
            }
        }
    }
    emit(c, out, text);
    return kOk;
}

int cmd_route(const Config& c, std::ostream& out) {
    check_format(c, {"text", "json"});
    const i64 a = single_a(c);
    if (c.dims != 1) throw UsageError("route supports --dims 1 only");
    const Scheme s = scheme_or(c, Scheme::IST);
    if (c.src.empty() || c.dst.empty()) throw UsageError("route needs --src and --dst");
    TreeSet set = trees_for(s, a, reading_for(c, "resolved"));
    const DenseEJ& net = *set.net;
    EJInt S = reduce(parse_addr(c.src, "--src"), net.gen());
    EJInt D = reduce(parse_addr(c.dst, "--dst"), net.gen());
    if (S == D) throw UsageError("source and destination coincide");
    if (c.tree < 0 || c.tree > static_cast<int>(set.trees.size()))
        throw UsageError("--tree must be in 1.." + std::to_string(set.trees.size()));
    FaultSet faults = parse_faults(c, net);
    if (faults.node_faulty(net.id(S)) || faults.node_faulty(net.id(D)))
        throw UsageError("source or destination is faulty");

    int t = c.tree;
    if (t == 0) {
        auto pick = fault_tolerant_route(S, D, set, faults);
        if (!pick) {
            emit(c, out, c.format == "json" ? std::string("{\"delivered\":false,\"dropped\":\"unreachable\"}\n")
                                            : std::string("unreachable: every tree path meets a fault\n"));
            return kFailed;
        }
        t = pick->tree;
    }
    RouteOutcome res = simulate_route(S, D, set, t, faults);
    emit(c, out, c.format == "json" ? trace_json(res) : format_trace(res));
    return res.delivered ? kOk : kFailed;
}

int cmd_simulate(const Config& c, std::ostream& out, std::ostream& err) {
    check_format(c, {"text", "csv"});
    const Scheme s = scheme_or(c, Scheme::IST);
    if (c.b != 0) throw UsageError("--b is not accepted with an --a range");
    std::vector<i64> as = parse_range(c.a.empty() ? "2" : c.a, "--a");
    for (i64 a : as)
        if (a < 1) throw UsageError("generator needs a >= 1");
    std::vector<int> fs;
    for (i64 f : parse_range(c.f, "--f")) {
        const i64 cap = s == Scheme::IST ? 5 : 2;
        if (f < 0 || f > cap)
            throw UsageError("--f must lie in 0.." + std::to_string(cap) + " for " + std::string(scheme_name(s)));
        fs.push_back(static_cast<int>(f));
    }
    if (c.link_count < 0 || c.link_count > 2 || (c.link_count > 0 && s != Scheme::EDNIST))
        throw UsageError("--fault-links takes 0..2 and only with --scheme ednist");

    Policy pol;
    if (c.exhaustive) pol = Policy::exhaustive();
    else if (c.samples) pol = Policy::sampled(c.samples, c.seed);
    else pol.seed = c.seed;

    SimOptions opt;
    opt.links = c.link_count;
    opt.log = c.log_cap ? &err : nullptr;
    opt.log_cap = c.log_cap;

    // the printed IST tables are the ones measured in the published experiments
    const std::string reading = reading_for(c, s == Scheme::IST ? "printed" : "resolved");
    std::string csv = csv_header();
    bool ok = true;
    for (i64 a : as) {
        if (fs.empty()) continue;
        TreeSet set = trees_for(s, a, reading);
        err << "# " << scheme_name(s) << " a=" << a << " reading " << set.interpretation_id << "\n";
        // reachability is only promised by trees that really are independent
        const bool independent = verify_node_independent(set.trees).pass;
        if (!independent) err << "# trees are not node-independent; unreachable nodes are skipped\n";
        for (int f : fs) {
            SimRecord r = experiment(set, f, pol, opt);
            csv += csv_row(r);
            if (r.unreachable)
                err << "# a=" << a << " f=" << f << ": " << r.unreachable << " unreachable (set, node) pair(s)\n";
            if (r.bound_violations || (independent && r.guaranteed() && r.unreachable)) {
                ok = false;
                err << "invariant violated at a=" << a << " f=" << f << ": " << r.bound_violations
                    << " set(s) out of bounds, " << r.unreachable << " unreachable\n";
            }
        }
    }
    emit(c, out, csv);
    return ok ? kOk : kFailed;
}

std::string product_tree_json(const ProductTree& t) {
    nlohmann::json j;
    j["scheme"] = scheme_name(t.scheme);
    j["t"] = t.t;
    j["dims"] = t.net->dims();
    auto& parents = j["parents"] = nlohmann::json::array();
    for (std::size_t v = 1; v < t.parent.size(); ++v)
        parents.push_back({v, t.parent[v], static_cast<int>(t.dim[v]), static_cast<int>(t.dir[v])});
    return j.dump() + "\n";
}

int cmd_export(const Config& c, std::ostream& out) {
    check_format(c, {"dot", "json"});
    const i64 a = single_a(c);
    const bool dot = c.format == "dot";
    if (c.scheme.empty()) {
        std::string text;
        if (c.dims == 1) {
            auto net = network(a);
            text = dot ? network_dot(*net) : network_json(*net);
        } else {
            ProductNet net = ProductNet::uniform(a, c.dims);
            text = dot ? product_dot(net) : product_json(net);
        }
        emit(c, out, text);
        return kOk;
    }

    const Scheme s = scheme_or(c, Scheme::IST);
    const std::string reading = reading_for(c, "resolved");
    std::vector<std::pair<std::string, std::string>> files;  // name, content
    const std::string stem = std::string(scheme_name(s)) + "_a" + std::to_string(a);
    const std::string ext = dot ? ".dot" : ".json";
    if (c.dims == 1) {
        TreeSet set = trees_for(s, a, reading);
        for (const auto& tr : set.trees)
            if (!c.tree || tr.t == c.tree)
                files.emplace_back(stem + "_t" + std::to_string(tr.t) + ext, dot ? tree_dot(tr) : tree_json(tr));
    } else {
        auto net = std::make_shared<const ProductNet>(ProductNet::uniform(a, c.dims));
        for (const auto& tr : build_product_trees(s, net, reading))
            if (!c.tree || tr.t == c.tree)
                files.emplace_back(stem + "_d" + std::to_string(c.dims) + "_t" + std::to_string(tr.t) + ext,
                                   dot ? product_tree_dot(tr) : product_tree_json(tr));
    }
    if (files.empty()) throw UsageError("--tree out of range");

    if (c.out.empty()) {
        for (const auto& [name, body] : files) out << body;
        return kOk;
    }
    std::error_code ec;
    fs::create_directories(c.out, ec);
    for (const auto& [name, body] : files) {
        fs::path p = fs::path(c.out) / name;
        std::ofstream f(p, std::ios::binary);
        if (!f || !(f << body)) throw UsageError("cannot write " + p.string());
        out << p.string() << "\n";
    }
    return kOk;
}

void add_common(CLI::App* sub, Config& c) {
    sub->add_option("--a", c.a, "generator alpha = a + (a+1)rho");
    sub->add_option("--b", c.b, "must equal a+1 if given");
    sub->add_option("--dims", c.dims, "cross-product dimension")->check(CLI::PositiveNumber);
    sub->add_option("--scheme", c.scheme, "ednist | ist");
    sub->add_option("--reading", c.reading, "printed | resolved | explicit reading id");
    sub->add_option("--format", c.format, "text | json | dot | csv");
    sub->add_option("--out", c.out, "output file (directory for per-tree exports)");
}

}  // namespace

int ejst_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ejst: spanning trees, routing and fault sweeps on dense EJ networks"};
    app.require_subcommand(1);
    Config c;

    auto* verify = app.add_subcommand("verify", "run the tree verifier suite");
    add_common(verify, c);

    auto* trees = app.add_subcommand("trees", "print the spanning trees");
    add_common(trees, c);
    trees->add_option("--tree", c.tree, "tree index (1-based)");

    auto* route = app.add_subcommand("route", "trace a message along a tree");
    add_common(route, c);
    route->add_option("--tree", c.tree, "tree index; omitted: best surviving tree");
    route->add_option("--src", c.src, "source x,y[,z]");
    route->add_option("--dst", c.dst, "destination x,y[,z]");
    route->add_option("--faults", c.faults, "faulty nodes")->delimiter(';');
    route->add_option("--fault-links", c.fault_links, "faulty links x,y:x',y'")->delimiter(';');

    auto* simulate = app.add_subcommand("simulate", "fault sweep, CSV out");
    add_common(simulate, c);
    simulate->add_option("--f", c.f, "fault counts, e.g. 0..5");
    auto* ex = simulate->add_flag("--exhaustive", c.exhaustive, "enumerate every fault set");
    auto* sm = simulate->add_option("--samples", c.samples, "number of sampled fault sets");
    ex->excludes(sm);
    simulate->add_option("--seed", c.seed, "sampling seed");
    simulate->add_option("--fault-links", c.link_count, "faulty links per set (ednist only)");
    simulate->add_option("--log", c.log_cap, "log up to N fault sets to stderr");

    auto* exp = app.add_subcommand("export", "DOT/JSON of the network or its trees");
    add_common(exp, c);
    exp->add_option("--tree", c.tree, "only this tree");

    // CLI11 wants argv; keep the strings alive
    std::vector<std::string> store;
    store.emplace_back("ejst");
    store.insert(store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    // export defaults to DOT, verify/trees/route to text, simulate to CSV
    if (exp->parsed() && c.format == "text") c.format = "dot";
    try {
        if (verify->parsed()) return cmd_verify(c, out);
        if (trees->parsed()) return cmd_trees(c, out);
        if (route->parsed()) return cmd_route(c, out);
        if (simulate->parsed()) return cmd_simulate(c, out, err);
        return cmd_export(c, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << " (raise EJST_BUDGET or use --samples)\n";
        return kBudget;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    }
}

}  // namespace ejst
