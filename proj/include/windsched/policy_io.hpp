#pragma once

// Text serialization of PolicyTable. The format is line-oriented with a
// versioned header; doubles are printed with %.17g so a write/read/write
// cycle is byte-identical. Layout:
//
//   windsched-policy 1
//   market <c1> <c2> <c_p> <u_cap> <v_cap> <M> <K>
//   caps <P_max> <N_max> <quad_w> <quad_d>
//   s_grid <n> <v...>            (u_grid, price_grid alike)
//   zeta <count> <n_pl>
//   <3*3*n_pl cell indices>      one rule per line
//   policy
//   <m> <P_u> <s_idx> <u_idx> <zeta_idx> <value>
//   surfaces <m> <count>
//   surface <s_idx> <u_idx> <zeta_idx>
//   <P_max+1 values>             K lines, one per T2-slot
//   surface_of <m> <P_max+1 indices>
//   end

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "windsched/persistent.hpp"

namespace windsched {

namespace detail {

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void expect_word(std::istream& in, const std::string& want) {
    std::string got;
    if (!(in >> got) || got != want)
        throw std::runtime_error("policy file: expected '" + want + "', got '" + got + "'");
}

template <typename T>
inline T read_value(std::istream& in, const char* what) {
    T x;
    if (!(in >> x)) throw std::runtime_error(std::string("policy file: failed to read ") + what);
    return x;
}

}  // namespace detail

inline void write_policy(std::ostream& out, const PolicyTable& t) {
    using detail::fmt_double;
    out << "windsched-policy 1\n";
    out << "market " << fmt_double(t.params.c1) << ' ' << fmt_double(t.params.c2) << ' '
        << fmt_double(t.params.c_p) << ' ' << fmt_double(t.params.u_cap) << ' '
        << fmt_double(t.params.v_cap) << ' ' << t.params.M << ' ' << t.params.K << '\n';
    out << "caps " << t.P_max << ' ' << t.N_max << ' ' << t.quad_nodes_w << ' ' << t.quad_nodes_d
        << '\n';
    auto grid = [&](const char* name, const std::vector<double>& g) {
        out << name << ' ' << g.size();
        for (double x : g) out << ' ' << fmt_double(x);
        out << '\n';
    };
    grid("s_grid", t.s_grid);
    grid("u_grid", t.u_grid);
    grid("price_grid", t.price_grid);
    out << "zeta " << t.zeta_family.size() << ' ' << (t.P_max + 1) << '\n';
    for (const ZetaRule& r : t.zeta_family) {
        for (std::size_t i = 0; i < r.price_idx.size(); ++i)
            out << (i ? " " : "") << int(r.price_idx[i]);
        out << '\n';
    }
    out << "policy\n";
    for (int m = 1; m <= t.params.M; ++m)
        for (int pu = 0; pu <= t.P_max; ++pu) {
            const PolicyEntry& e = t.best[m - 1][pu];
            out << m << ' ' << pu << ' ' << e.s_idx << ' ' << e.u_idx << ' ' << e.zeta_idx << ' '
                << fmt_double(e.value) << '\n';
        }
    for (int m = 1; m <= t.params.M; ++m) {
        out << "surfaces " << m << ' ' << t.lower[m - 1].size() << '\n';
        for (const LowerSurface& srf : t.lower[m - 1]) {
            out << "surface " << srf.s_idx << ' ' << srf.u_idx << ' ' << srf.zeta_idx << '\n';
            for (int k = 0; k < t.params.K; ++k) {
                for (int pl = 0; pl <= t.P_max; ++pl)
                    out << (pl ? " " : "") << fmt_double(srf.V[k][pl]);
                out << '\n';
            }
        }
        out << "surface_of " << m;
        for (int pu = 0; pu <= t.P_max; ++pu) out << ' ' << t.surface_of[m - 1][pu];
        out << '\n';
    }
    out << "end\n";
}

inline PolicyTable read_policy(std::istream& in) {
    using detail::expect_word;
    using detail::read_value;
    expect_word(in, "windsched-policy");
    int version = read_value<int>(in, "version");
    if (version != 1) throw std::runtime_error("policy file: unsupported version");

    PolicyTable t;
    expect_word(in, "market");
    t.params.c1 = read_value<double>(in, "c1");
    t.params.c2 = read_value<double>(in, "c2");
    t.params.c_p = read_value<double>(in, "c_p");
    t.params.u_cap = read_value<double>(in, "u_cap");
    t.params.v_cap = read_value<double>(in, "v_cap");
    t.params.M = read_value<int>(in, "M");
    t.params.K = read_value<int>(in, "K");
    expect_word(in, "caps");
    t.P_max = read_value<int>(in, "P_max");
    t.N_max = read_value<int>(in, "N_max");
    t.quad_nodes_w = read_value<int>(in, "quad_nodes_w");
    t.quad_nodes_d = read_value<int>(in, "quad_nodes_d");
    if (t.params.M < 1 || t.params.K < 1 || t.P_max < 0)
        throw std::runtime_error("policy file: invalid dimensions");

    auto grid = [&](const char* name, std::vector<double>& g) {
        expect_word(in, name);
        long n = read_value<long>(in, name);
        if (n < 1 || n > 1000000) throw std::runtime_error("policy file: bad grid size");
        g.resize(n);
        for (long i = 0; i < n; ++i) g[i] = read_value<double>(in, name);
    };
    grid("s_grid", t.s_grid);
    grid("u_grid", t.u_grid);
    grid("price_grid", t.price_grid);

    expect_word(in, "zeta");
    long n_rules = read_value<long>(in, "zeta count");
    long n_pl = read_value<long>(in, "zeta n_pl");
    if (n_pl != t.P_max + 1) throw std::runtime_error("policy file: zeta table size mismatch");
    t.zeta_family.resize(n_rules);
    for (ZetaRule& r : t.zeta_family) {
        r.n_pl = int(n_pl);
        r.price_idx.resize(3 * 3 * n_pl);
        for (std::uint8_t& c : r.price_idx) {
            int x = read_value<int>(in, "zeta cell");
            if (x < 0 || x >= int(t.price_grid.size()))
                throw std::runtime_error("policy file: zeta cell out of range");
            c = std::uint8_t(x);
        }
    }

    expect_word(in, "policy");
    t.best.assign(t.params.M, std::vector<PolicyEntry>(t.P_max + 1));
    t.value.assign(t.params.M, std::vector<double>(t.P_max + 1, 0.0));
    for (int m = 1; m <= t.params.M; ++m)
        for (int pu = 0; pu <= t.P_max; ++pu) {
            int rm = read_value<int>(in, "policy m");
            int rpu = read_value<int>(in, "policy P_u");
            if (rm != m || rpu != pu) throw std::runtime_error("policy file: rows out of order");
            PolicyEntry e;
            e.s_idx = read_value<int>(in, "s_idx");
            e.u_idx = read_value<int>(in, "u_idx");
            e.zeta_idx = read_value<int>(in, "zeta_idx");
            e.value = read_value<double>(in, "value");
            if (e.s_idx < 0 || e.s_idx >= int(t.s_grid.size()) || e.u_idx < 0 ||
                e.u_idx >= int(t.u_grid.size()) || e.zeta_idx < 0 ||
                e.zeta_idx >= int(t.zeta_family.size()))
                throw std::runtime_error("policy file: action index out of range");
            t.best[m - 1][pu] = e;
            t.value[m - 1][pu] = e.value;
        }

    t.lower.assign(t.params.M, {});
    t.surface_of.assign(t.params.M, std::vector<int>(t.P_max + 1, -1));
    for (int m = 1; m <= t.params.M; ++m) {
        expect_word(in, "surfaces");
        int rm = read_value<int>(in, "surfaces m");
        long count = read_value<long>(in, "surfaces count");
        if (rm != m || count < 0) throw std::runtime_error("policy file: bad surfaces header");
        t.lower[m - 1].resize(count);
        for (LowerSurface& srf : t.lower[m - 1]) {
            expect_word(in, "surface");
            srf.s_idx = read_value<int>(in, "surface s_idx");
            srf.u_idx = read_value<int>(in, "surface u_idx");
            srf.zeta_idx = read_value<int>(in, "surface zeta_idx");
            srf.V.assign(t.params.K, std::vector<double>(t.P_max + 1, 0.0));
            for (int k = 0; k < t.params.K; ++k)
                for (int pl = 0; pl <= t.P_max; ++pl)
                    srf.V[k][pl] = read_value<double>(in, "surface value");
        }
        expect_word(in, "surface_of");
        rm = read_value<int>(in, "surface_of m");
        if (rm != m) throw std::runtime_error("policy file: bad surface_of header");
        for (int pu = 0; pu <= t.P_max; ++pu) {
            int idx = read_value<int>(in, "surface_of idx");
            if (idx < 0 || idx >= int(t.lower[m - 1].size()))
                throw std::runtime_error("policy file: surface index out of range");
            t.surface_of[m - 1][pu] = idx;
        }
    }
    expect_word(in, "end");
    return t;
}

inline void write_policy_file(const std::string& path, const PolicyTable& t) {
    std::ofstream out(path, std::ios::binary);  // binary: keep \n exact for byte-stable reruns
    if (!out) throw std::runtime_error("cannot open policy file for writing: " + path);
    write_policy(out, t);
    if (!out) throw std::runtime_error("failed writing policy file: " + path);
}

inline PolicyTable read_policy_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open policy file: " + path);
    return read_policy(in);
}

}  // namespace windsched
