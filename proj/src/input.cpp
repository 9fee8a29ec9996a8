#include "nlf/input.hpp"

#include <fstream>
#include <sstream>

namespace nlf {
namespace {

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

int parse_index(const std::string& tok, int upper, const std::string& what, int lineno) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        if (v < 1 || v > upper)
            throw InvalidInput("line " + std::to_string(lineno) + ": " + what + " index " + tok +
                               " out of range 1.." + std::to_string(upper));
        return v;
    } catch (const InvalidInput&) {
        throw;
    } catch (const std::exception&) {
        throw InvalidInput("line " + std::to_string(lineno) + ": malformed " + what + " index '" +
                           tok + "'");
    }
}

} // namespace

ProblemInput parse_problem_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    ProblemInput out;
    Expression zero;  // filled in once the chart is known
    auto require_chart = [&](const char* directive) {
        if (!out.chart)
            throw InvalidInput("'" + std::string(directive) + "' before 'dims'");
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string body = strip_comment(line);
        if (blank(body)) continue;
        std::istringstream ls(body);
        std::string directive;
        ls >> directive;

        if (directive == "dims") {
            if (out.chart) throw InvalidInput("duplicate 'dims' directive");
            int n = 0, m = 0;
            if (!(ls >> n >> m))
                throw InvalidInput("line " + std::to_string(lineno) + ": expected 'dims n m'");
            out.chart = std::make_shared<ChartSpec>(n, m);
            zero = parse_lagrangian("0", out.chart);
            out.g.assign(static_cast<std::size_t>(n),
                         std::vector<Expression>(static_cast<std::size_t>(n), zero));
            out.h.assign(static_cast<std::size_t>(m),
                         std::vector<Expression>(static_cast<std::size_t>(m), zero));
            out.N.assign(static_cast<std::size_t>(m),
                         std::vector<Expression>(static_cast<std::size_t>(n), zero));
            continue;
        }
        if (directive == "lagrangian") {
            require_chart("lagrangian");
            if (out.lagrangian)
                throw InvalidInput("line " + std::to_string(lineno) + ": duplicate 'lagrangian'");
            std::string rest;
            std::getline(ls, rest);
            if (blank(rest))
                throw InvalidInput("line " + std::to_string(lineno) + ": missing expression");
            out.lagrangian = parse_lagrangian(rest, out.chart);
            continue;
        }
        if (directive == "metric_block") {
            require_chart("metric_block");
            std::string which, si, sj;
            if (!(ls >> which >> si >> sj))
                throw InvalidInput("line " + std::to_string(lineno) +
                                   ": expected 'metric_block g|h i j <expr>'");
            std::string rest;
            std::getline(ls, rest);
            if (blank(rest))
                throw InvalidInput("line " + std::to_string(lineno) + ": missing expression");
            Expression e = parse_lagrangian(rest, out.chart);
            if (which == "g") {
                int i = parse_index(si, out.chart->n(), "g row", lineno);
                int j = parse_index(sj, out.chart->n(), "g column", lineno);
                out.g[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = e;
                out.g[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = e;
            } else if (which == "h") {
                int a = parse_index(si, out.chart->m(), "h row", lineno);
                int b = parse_index(sj, out.chart->m(), "h column", lineno);
                out.h[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] = e;
                out.h[static_cast<std::size_t>(b - 1)][static_cast<std::size_t>(a - 1)] = e;
            } else {
                throw InvalidInput("line " + std::to_string(lineno) +
                                   ": metric_block expects 'g' or 'h'");
            }
            out.has_dmetric = true;
            continue;
        }
        if (directive == "nconn") {
            require_chart("nconn");
            std::string sa, si;
            if (!(ls >> sa >> si))
                throw InvalidInput("line " + std::to_string(lineno) +
                                   ": expected 'nconn a i <expr>'");
            std::string rest;
            std::getline(ls, rest);
            if (blank(rest))
                throw InvalidInput("line " + std::to_string(lineno) + ": missing expression");
            int a = parse_index(sa, out.chart->m(), "nconn fiber", lineno);
            int i = parse_index(si, out.chart->n(), "nconn base", lineno);
            out.N[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(i - 1)] =
                parse_lagrangian(rest, out.chart);
            out.has_dmetric = true;
            continue;
        }
        throw InvalidInput("line " + std::to_string(lineno) + ": unknown directive '" +
                           directive + "'");
    }

    if (!out.chart) throw InvalidInput("missing 'dims' directive");
    if (!out.lagrangian && !out.has_dmetric)
        throw InvalidInput("input defines neither a lagrangian nor d-metric blocks");
    if (out.lagrangian && out.has_dmetric)
        throw InvalidInput("input mixes 'lagrangian' with direct d-metric blocks");
    return out;
}

ProblemInput parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_text(buf.str());
}

} // namespace nlf
