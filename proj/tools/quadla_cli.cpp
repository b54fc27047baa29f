// quadla: command-line front end for the block-recursive matrix library.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
// 3 singular matrix, 4 singular pivot block, 5 randomness exhausted.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "quadla/quadla.hpp"

namespace {

using namespace quadla;

enum Exit { ok = 0, verify_failed = 1, usage = 2, singular = 3, pivot = 4, exhausted = 5 };

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

AnyDenseMatrix load(const std::string& path) {
    if (path == "-") return read_matrix(std::cin);
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open '" + path + "'");
    return read_matrix(in);
}

/// Writes to `path`, or stdout when empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw usage_error("cannot write '" + path + "'");
    out << text;
}

template <Ring T>
DenseMatrix<T> truncate(const DenseMatrix<T>& m, std::size_t n) {
    if (m.size() == n) return m;
    DenseMatrix<T> out(n, m(0, 0).context().zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = m(i, j);
    return out;
}

template <Ring T>
BlockMatrix<T> to_blocks(const DenseMatrix<T>& m) {
    if (!is_power_of_two(m.size()))
        std::cerr << "note: " << m.size() << "x" << m.size() << " input embedded in dimension "
                  << (std::size_t{1} << ceil_log2(m.size())) << " with identity padding\n";
    return embed(m);
}

void summary(const OpCounter& c) { std::cerr << c << '\n'; }

std::string perm_line(const char* label, const PermutationTrace& p) {
    std::ostringstream s;
    s << label;
    for (auto i : p.vector()) s << ' ' << i;
    s << '\n';
    return s.str();
}

// ---------------------------------------------------------------- gen

struct GenArgs {
    std::string ring;
    std::size_t size = 0;
    std::uint64_t seed = 1;
    bool invertible = false;
    bool all_blocks_singular = false;
    std::string out;
};

int run_gen(const GenArgs& a) {
    const auto spec = RingSpec::parse(a.ring);
    if (a.size == 0 || a.size > 256) throw usage_error("--size must be in 1..256");
    if (a.all_blocks_singular && (!is_power_of_two(a.size) || a.size < 4))
        throw usage_error("--all-blocks-singular needs a power-of-two size >= 4");
    return spec.visit([&](const auto& ctx) {
        using T = std::decay_t<decltype(ctx.zero())>;
        Generator g(a.seed);
        std::optional<DenseMatrix<T>> m;
        if (a.all_blocks_singular) {
            m = to_dense(random_all_blocks_singular<T>(ctx, ceil_log2(a.size), g));
        } else {
            for (int draw = 0; draw < 1000 && !m; ++draw) {
                auto candidate = random_dense<T>(ctx, a.size, g);
                if (!a.invertible || is_invertible(embed(candidate))) m = std::move(candidate);
            }
            if (!m) throw usage_error("no invertible matrix found for these flags");
        }
        std::ostringstream text;
        write_matrix(text, *m);
        text << "# generator " << generator_name << " seed " << a.seed << '\n';
        emit(a.out, text.str());
        return Exit::ok;
    });
}

// ---------------------------------------------------------------- mul

int run_mul(const std::string& left, const std::string& right, const std::string& strategy, const std::string& out) {
    const auto x = load(left);
    const auto y = load(right);
    if (x.index() != y.index()) throw usage_error("operands are over different rings");
    return std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a(0, 0))>;
            const auto& b = std::get<DenseMatrix<T>>(y);
            if (a.size() != b.size()) throw usage_error("operands have different sizes");
            OpCounter c("mul");
            auto prod = mul(to_blocks(a), to_blocks(b), c, strategy == "strassen" ? MulStrategy::strassen : MulStrategy::naive);
            emit(out, format_matrix(truncate(to_dense(prod), a.size())));
            summary(c);
            return Exit::ok;
        },
        x);
}

// ---------------------------------------------------------------- invert

int run_invert(const std::string& in, const std::string& method, const std::string& out) {
    const auto input = load(in);
    return std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a(0, 0))>;
            OpCounter c("invert/" + method);
            const auto m = to_blocks(a);
            BlockMatrix<T> inv = m;
            if (method == "schur") inv = schur_invert(m, c);
            else if (method == "gram") inv = invert_gram(m, c);
            else if (method == "auto") inv = auto_invert(m, c);
            else if constexpr (ring_traits<T>::commutative) inv = invert_gram_gv(m, c);
            else throw usage_error("--method gv needs a commutative field");
            emit(out, format_matrix(truncate(to_dense(inv), a.size())));
            summary(c);
            return Exit::ok;
        },
        input);
}

// ---------------------------------------------------------------- lu / ldu

struct LuArgs {
    std::string in;
    bool randomized = false;
    std::uint64_t seed = 1;
    int max_retries = 8;
    std::string lower, upper, perms;
};

int run_lu(const LuArgs& a) {
    const auto input = load(a.in);
    return std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d(0, 0))>;
            OpCounter c("lu");
            const auto m = to_blocks(d);
            std::optional<LUResult<T>> r;
            if (a.randomized) {
                auto f = randomized_lu(m, a.seed, a.max_retries, c);
                r.emplace(LUResult<T>{PermutationTrace::identity(m.depth()), std::move(f.l), std::move(f.u),
                                      PermutationTrace::identity(m.depth()), true, f.attempts});
            } else {
                r.emplace(lu_decompose(m, c, LuOptions{a.seed, a.max_retries}));
            }
            const auto l_text = format_matrix(to_dense(r->l.body()));
            const auto u_text = format_matrix(to_dense(r->u.body()));
            const auto p_text = perm_line("perm-rows", r->p) + perm_line("perm-cols", r->q);
            if (a.lower.empty() && a.upper.empty() && a.perms.empty()) {
                std::cout << l_text << u_text << p_text;
            } else {
                emit(a.lower, l_text);
                emit(a.upper, u_text);
                emit(a.perms, p_text);
            }
            std::cerr << "randomized: " << (r->randomized_used ? "yes" : "no") << ", attempts: " << r->retries << '\n';
            summary(c);
            return Exit::ok;
        },
        input);
}

int run_ldu(const std::string& in, const std::string& lower, const std::string& diag, const std::string& upper) {
    const auto input = load(in);
    return std::visit(
        [&](const auto& d) {
            OpCounter c("ldu");
            auto r = ldu(to_blocks(d), c);
            const auto lt = format_matrix(to_dense(r.lower));
            const auto dt = format_matrix(to_dense(r.diagonal));
            const auto ut = format_matrix(to_dense(r.upper));
            if (lower.empty() && diag.empty() && upper.empty()) {
                std::cout << lt << dt << ut;
            } else {
                emit(lower, lt);
                emit(diag, dt);
                emit(upper, ut);
            }
            summary(c);
            return Exit::ok;
        },
        input);
}

// ---------------------------------------------------------------- check

template <Ring T>
int compare(const DenseMatrix<T>& expected, const DenseMatrix<T>& actual, const char* what) {
    for (std::size_t i = 0; i < expected.size(); ++i)
        for (std::size_t j = 0; j < expected.size(); ++j)
            if (!(expected(i, j) == actual(i, j))) {
                std::cout << "FAIL " << what << " at (" << i + 1 << ", " << j + 1 << "): expected "
                          << detail::render(expected(i, j)) << ", got " << detail::render(actual(i, j)) << '\n';
                return Exit::verify_failed;
            }
    std::cout << "OK " << what << '\n';
    return Exit::ok;
}

std::vector<std::size_t> read_perm(std::istream& in, const std::string& label, std::size_t n) {
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (word != label) throw parse_error("expected '" + label + "' line");
        std::vector<std::size_t> v;
        std::size_t x;
        while (ls >> x) v.push_back(x);
        if (!ls.eof()) throw parse_error("bad entry on '" + label + "' line");
        std::vector<bool> seen(n + 1, false);
        if (v.size() != n) throw parse_error("'" + label + "' needs " + std::to_string(n) + " entries");
        for (auto i : v) {
            if (i < 1 || i > n || seen[i]) throw parse_error("'" + label + "' is not a permutation of 1.." + std::to_string(n));
            seen[i] = true;
        }
        return v;
    }
    throw parse_error("missing '" + label + "' line");
}

template <Ring T>
const DenseMatrix<T>& same_ring(const AnyDenseMatrix& m, std::size_t n) {
    const auto* p = std::get_if<DenseMatrix<T>>(&m);
    if (!p) throw parse_error("operand is over a different ring");
    if (p->size() != n) throw parse_error("operand has size " + std::to_string(p->size()) + ", expected " + std::to_string(n));
    return *p;
}

template <Ring T>
bool shaped(const DenseMatrix<T>& m, Orientation o, bool unit, const char* what) {
    if (is_triangular(from_dense(m), o, unit)) return true;
    std::cout << "FAIL " << what << " is not " << (unit ? "unit " : "") << (o == Orientation::lower ? "lower" : "upper")
              << " triangular\n";
    return false;
}

int run_check(const std::string& kind, const std::vector<std::string>& files) {
    auto need = [&](std::size_t k) {
        if (files.size() != k) throw usage_error("--kind " + kind + " needs " + std::to_string(k) + " files");
    };
    if (kind == "inverse") need(2);
    else if (kind == "pluq") need(4);
    else if (kind == "ldu") need(4);
    else throw usage_error("unknown --kind '" + kind + "'");

    const auto base = load(files[0]);
    return std::visit(
        [&](const auto& m) -> int {
            using T = std::decay_t<decltype(m(0, 0))>;
            const auto ctx = m(0, 0).context();
            if (kind == "inverse") {
                const auto inv_file = load(files[1]);
                const auto& inv = same_ring<T>(inv_file, m.size());
                const auto prod = to_dense(embed(m) * embed(inv));
                return compare(DenseMatrix<T>::identity(ctx, m.size()), truncate(prod, m.size()), "M*N = I");
            }
            const auto padded = to_dense(embed(m));
            const std::size_t n = padded.size();
            if (kind == "pluq") {
                const auto l_file = load(files[1]);
                const auto u_file = load(files[2]);
                const auto& l = same_ring<T>(l_file, n);
                const auto& u = same_ring<T>(u_file, n);
                std::ifstream pin(files[3]);
                if (!pin) throw usage_error("cannot open '" + files[3] + "'");
                const auto pr = read_perm(pin, "perm-rows", n);
                const auto pc = read_perm(pin, "perm-cols", n);
                if (!shaped(l, Orientation::lower, true, "L") || !shaped(u, Orientation::upper, false, "U"))
                    return Exit::verify_failed;
                DenseMatrix<T> permuted(n, ctx.zero());
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) permuted(i, j) = padded(pr[i] - 1, pc[j] - 1);
                return compare(permuted, to_dense(from_dense(l) * from_dense(u)), "P^-1 M Q^-1 = L*U");
            }
            const auto lb_file = load(files[1]);
            const auto db_file = load(files[2]);
            const auto ub_file = load(files[3]);
            const auto& lb = same_ring<T>(lb_file, n);
            const auto& db = same_ring<T>(db_file, n);
            const auto& ub = same_ring<T>(ub_file, n);
            return compare(padded, to_dense(from_dense(lb) * from_dense(db) * from_dense(ub)), "Lb*Db*Ub = M");
        },
        base);
}

// ---------------------------------------------------------------- verify-counts

int run_verify(const std::vector<std::string>& ops, const std::vector<std::uint64_t>& sizes, std::uint64_t seed,
               const std::string& format) {
    std::vector<std::string> selected = ops;
    if (selected.empty() || (selected.size() == 1 && selected[0] == "all")) selected = count_operations();
    bool all_match = true;
    for (const auto& op : selected) {
        auto reports = verify_counts(op, sizes, seed);
        if (format != "lines") {
            write_count_table(std::cout, reports);
            std::cout << '\n';
        }
        if (format != "table") write_count_lines(std::cout, reports);
        for (const auto& r : reports) all_match = all_match && r.recurrence_match;
    }
    return all_match ? Exit::ok : Exit::verify_failed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact block-recursive matrix inversion and LU over rings and fields"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "generate a random matrix");
    g->add_option("--ring", gen.ring, "q | gf:P | qi | quat | ratfun:q | ratfun:gf:P")->required();
    g->add_option("--size", gen.size, "dimension, at most 256")->required();
    g->add_option("--seed", gen.seed, "generator seed");
    g->add_flag("--invertible", gen.invertible, "redraw until invertible");
    g->add_flag("--all-blocks-singular", gen.all_blocks_singular, "invertible with all four half-size blocks singular");
    g->add_option("-o,--output", gen.out, "output file (default stdout)");

    std::string mul_a, mul_b, mul_strategy = "naive", mul_out;
    auto* m = app.add_subcommand("mul", "multiply two matrices");
    m->add_option("left", mul_a)->required();
    m->add_option("right", mul_b)->required();
    m->add_option("--strategy", mul_strategy)->check(CLI::IsMember({"naive", "strassen"}));
    m->add_option("-o,--output", mul_out);

    std::string inv_in, inv_method = "auto", inv_out;
    auto* iv = app.add_subcommand("invert", "invert a matrix");
    iv->add_option("input", inv_in)->required();
    iv->add_option("--method", inv_method)->check(CLI::IsMember({"schur", "gram", "gv", "auto"}));
    iv->add_option("-o,--output", inv_out);

    LuArgs lu;
    auto* l = app.add_subcommand("lu", "PLUQ decomposition");
    l->add_option("input", lu.in)->required();
    l->add_flag("--randomized", lu.randomized, "use random triangular preconditioning, no permutations");
    l->add_option("--seed", lu.seed, "seed for the randomized path");
    l->add_option("--max-retries", lu.max_retries)->check(CLI::PositiveNumber);
    l->add_option("--lower", lu.lower, "file for L");
    l->add_option("--upper", lu.upper, "file for U");
    l->add_option("--perms", lu.perms, "file for the perm-rows / perm-cols lines");

    std::string ldu_in, ldu_l, ldu_d, ldu_u;
    auto* ld = app.add_subcommand("ldu", "single-level block LDU factorization");
    ld->add_option("input", ldu_in)->required();
    ld->add_option("--lower", ldu_l);
    ld->add_option("--diag", ldu_d);
    ld->add_option("--upper", ldu_u);

    std::string check_kind;
    std::vector<std::string> check_files;
    auto* ck = app.add_subcommand("check", "verify an inverse or a factorization exactly");
    ck->add_option("--kind", check_kind, "inverse | pluq | ldu")->required();
    ck->add_option("files", check_files, "inverse: M N; pluq: M L U PERMS; ldu: M Lb Db Ub")->required();

    std::vector<std::string> vc_ops;
    std::vector<std::uint64_t> vc_sizes{2, 4, 8};
    std::uint64_t vc_seed = 1;
    std::string vc_format = "both";
    auto* vc = app.add_subcommand("verify-counts", "compare measured operation counts with predictions");
    vc->add_option("--op", vc_ops, "mul | strassen | tri_mul | tri_inv | hermitian_inv | gram_inv | lu | all")
        ->delimiter(',');
    vc->add_option("--sizes", vc_sizes, "comma-separated powers of two <= 64")->delimiter(',');
    vc->add_option("--seed", vc_seed);
    vc->add_option("--format", vc_format)->check(CLI::IsMember({"table", "lines", "both"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Exit::usage;
    }

    try {
        if (*g) return run_gen(gen);
        if (*m) return run_mul(mul_a, mul_b, mul_strategy, mul_out);
        if (*iv) return run_invert(inv_in, inv_method, inv_out);
        if (*l) return run_lu(lu);
        if (*ld) return run_ldu(ldu_in, ldu_l, ldu_d, ldu_u);
        if (*ck) return run_check(check_kind, check_files);
        if (*vc) return run_verify(vc_ops, vc_sizes, vc_seed, vc_format);
    } catch (const pivot_block_singular& e) {
        std::cerr << "error: singular pivot block at " << e.path() << '\n';
        return Exit::pivot;
    } catch (const singular_matrix& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::singular;
    } catch (const randomness_exhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::exhausted;
    } catch (const non_constant_residue& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::verify_failed;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::usage;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::usage;
    } catch (const non_power_of_two& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::usage;
    } catch (const quadla::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::verify_failed;
    }
    return Exit::usage;
}
