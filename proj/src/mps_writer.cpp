#include "gridcap/errors.hpp"
#include "gridcap/lp.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

namespace gridcap::lp {

namespace {

// Left-justify into a fixed field; longer names overflow it.
void field(std::string& out, std::string_view text, std::size_t width)
{
    out += text;
    if (text.size() < width) out.append(width - text.size(), ' ');
}

void entry_line(std::string& out, std::string_view code, std::string_view name, std::string_view row, double value)
{
    out += ' ';
    field(out, code, 2);
    out += ' ';
    field(out, name, 8);
    out += "  ";
    field(out, row, 8);
    out += "  ";
    out += format_number(value);
    out += '\n';
}

char row_type(Sense sense)
{
    switch (sense) {
    case Sense::le: return 'L';
    case Sense::ge: return 'G';
    case Sense::eq: return 'E';
    }
    return 'E';
}

} // namespace

std::string format_number(double value)
{
    if (value == 0.0) return "0";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) {
        throw AssemblyError("cannot format number");
    }
    return std::string(buf, end);
}

std::string export_mps(const Model& model, std::string_view name)
{
    const auto& vars = model.variables();
    const auto& rows = model.constraints();

    // Column-wise view of the rows, in row order per column.
    std::vector<std::vector<std::pair<int, double>>> columns(vars.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& t : rows[i].terms) {
            columns[static_cast<std::size_t>(t.var)].emplace_back(static_cast<int>(i), t.coef);
        }
    }

    std::string out;
    out.reserve(64 * (vars.size() + model.num_nonzeros() + rows.size()) + 64);
    out += "NAME          ";
    out += name;
    out += "\nROWS\n N  obj\n";
    for (const auto& r : rows) {
        out += ' ';
        out += row_type(r.sense);
        out += "  ";
        out += r.name;
        out += '\n';
    }

    out += "COLUMNS\n";
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const auto& v = vars[j];
        if (v.cost != 0.0 || columns[j].empty()) {
            entry_line(out, "", v.name, "obj", v.cost);
        }
        for (const auto& [row, coef] : columns[j]) {
            entry_line(out, "", v.name, rows[static_cast<std::size_t>(row)].name, coef);
        }
    }

    out += "RHS\n";
    if (model.objective_constant() != 0.0) {
        entry_line(out, "", "RHS", "obj", -model.objective_constant());
    }
    for (const auto& r : rows) {
        if (r.rhs != 0.0) entry_line(out, "", "RHS", r.name, r.rhs);
    }

    out += "BOUNDS\n";
    for (const auto& v : vars) {
        const bool lo_inf = v.lower == -kInf;
        const bool up_inf = v.upper == kInf;
        if (lo_inf && up_inf) {
            out += " FR BND       ";
            out += v.name;
            out += '\n';
            continue;
        }
        if (!lo_inf && !up_inf && v.lower == v.upper) {
            entry_line(out, "FX", "BND", v.name, v.lower);
            continue;
        }
        if (lo_inf) {
            out += " MI BND       ";
            out += v.name;
            out += '\n';
        } else if (v.lower != 0.0) {
            entry_line(out, "LO", "BND", v.name, v.lower);
        }
        if (!up_inf) entry_line(out, "UP", "BND", v.name, v.upper);
    }
    out += "ENDATA\n";
    return out;
}

void write_mps(const Model& model, const std::string& path, std::string_view name)
{
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    file << export_mps(model, name);
    if (!file) {
        throw std::runtime_error("failed writing " + path);
    }
}

} // namespace gridcap::lp
