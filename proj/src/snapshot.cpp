#include "breather/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace breather {

namespace {

constexpr const char* kMagic = "BRTHR1";

void swap_doubles(std::vector<double>& values) {
    if constexpr (std::endian::native == std::endian::little) {
        (void)values;
    } else {
        for (double& v : values) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof(bits));
            bits = __builtin_bswap64(bits);
            std::memcpy(&v, &bits, sizeof(bits));
        }
    }
}

void write_payload(std::ofstream& out, std::vector<double> values) {
    swap_doubles(values);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
}

std::vector<double> read_payload(std::ifstream& in, std::size_t count, const std::string& path) {
    std::vector<double> values(count);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
        throw Error("snapshot " + path + ": truncated payload");
    swap_doubles(values);
    return values;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Header {
    std::string kind;
    std::map<std::string, std::string> fields;

    const std::string& get(const std::string& key, const std::string& path) const {
        auto it = fields.find(key);
        if (it == fields.end()) throw Error("snapshot " + path + ": missing header key " + key);
        return it->second;
    }
    int get_int(const std::string& key, const std::string& path) const {
        return std::stoi(get(key, path));
    }
    double get_double(const std::string& key, const std::string& path) const {
        return std::stod(get(key, path));
    }
};

Header read_header(std::ifstream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw Error("snapshot " + path + ": empty file");
    std::istringstream first(line);
    std::string magic;
    Header header;
    first >> magic >> header.kind;
    if (magic != kMagic) throw Error("snapshot " + path + ": bad magic, not a snapshot file");
    if (header.kind.empty()) throw Error("snapshot " + path + ": missing kind");
    while (std::getline(in, line)) {
        if (line == "data") return header;
        const std::size_t split = line.find(' ');
        if (split == std::string::npos || split == 0)
            throw Error("snapshot " + path + ": malformed header line: " + line);
        header.fields[line.substr(0, split)] = line.substr(split + 1);
    }
    throw Error("snapshot " + path + ": header has no data marker");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("snapshot " + path + ": cannot open for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("snapshot " + path + ": cannot open for reading");
    return in;
}

}  // namespace

void write_field(const std::string& path, const TimeField& field) {
    std::ofstream out = open_out(path);
    const SpaceGrid& grid = field.grid();
    out << kMagic << " field\n";
    out << "dim " << grid.dim << "\n";
    out << "half_width " << format_double(grid.half_width) << "\n";
    out << "points " << grid.points << "\n";
    out << "symmetry " << field.symmetry().index << "\n";
    out << "period " << format_double(field.period()) << "\n";
    out << "cutoff " << field.cutoff() << "\n";
    out << "modes";
    for (int k : field.mode_indices()) out << ' ' << k;
    out << "\ndata\n";

    std::vector<double> payload;
    payload.reserve(field.mode_indices().size() * grid.size() * 2);
    for (int k : field.mode_indices()) {
        for (const std::complex<double>& z : field.mode(k)) {
            payload.push_back(z.real());
            payload.push_back(z.imag());
        }
    }
    write_payload(out, std::move(payload));
    if (!out) throw Error("snapshot " + path + ": write failed");
}

TimeField read_field(const std::string& path) {
    std::ifstream in = open_in(path);
    const Header header = read_header(in, path);
    if (header.kind != "field")
        throw Error("snapshot " + path + ": expected a field, got " + header.kind);

    SpaceGrid grid{header.get_int("dim", path), header.get_double("half_width", path),
                   header.get_int("points", path)};
    grid.validate();
    const SymmetryClass sym(header.get_int("symmetry", path));
    const double period = header.get_double("period", path);
    const int cutoff = header.get_int("cutoff", path);

    TimeField field(grid, sym, cutoff, period);
    std::istringstream modes(header.get("modes", path));
    std::vector<int> listed;
    int k = 0;
    while (modes >> k) listed.push_back(k);
    if (listed != field.mode_indices())
        throw Error("snapshot " + path + ": mode list does not match the symmetry class");

    const std::vector<double> payload = read_payload(in, listed.size() * grid.size() * 2, path);
    std::size_t at = 0;
    for (int mode_k : listed) {
        ComplexField& target = field.mode(mode_k);
        for (std::complex<double>& z : target) {
            z = {payload[at], payload[at + 1]};
            at += 2;
        }
    }
    return field;
}

void write_weight(const std::string& path, const Potential& weight) {
    std::ofstream out = open_out(path);
    const SpaceGrid& grid = weight.grid();
    out << kMagic << " weight\n";
    out << "dim " << grid.dim << "\n";
    out << "half_width " << format_double(grid.half_width) << "\n";
    out << "points " << grid.points << "\n";
    out << "p " << format_double(weight.p()) << "\n";
    out << "q " << format_double(weight.q()) << "\n";
    out << "data\n";
    write_payload(out, weight.values());
    if (!out) throw Error("snapshot " + path + ": write failed");
}

Potential read_weight(const std::string& path) {
    std::ifstream in = open_in(path);
    const Header header = read_header(in, path);
    if (header.kind != "weight")
        throw Error("snapshot " + path + ": expected a weight, got " + header.kind);

    SpaceGrid grid{header.get_int("dim", path), header.get_double("half_width", path),
                   header.get_int("points", path)};
    grid.validate();
    const double p = header.get_double("p", path);
    const double q = header.get_double("q", path);
    RealField values = read_payload(in, grid.size(), path);
    return Potential(grid, std::move(values), p, q);
}

}  // namespace breather
