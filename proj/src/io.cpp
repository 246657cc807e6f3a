#include "kerrlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "kerrlab/error.hpp"

namespace kerrlab::io {

json layout_to_json(const ModeLayout& layout) {
    json modes = json::array();
    for (const auto& m : layout.modes()) {
        json entry;
        entry["kind"] = m.kind == ModeKind::qubit ? "qubit" : "bosonic";
        if (m.kind == ModeKind::bosonic) entry["cutoff"] = m.cutoff;
        entry["name"] = m.name;
        modes.push_back(std::move(entry));
    }
    return modes;
}

ModeLayout layout_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::parse_error, "layout must be an array");
    std::vector<Mode> modes;
    for (const auto& entry : j) {
        const auto kind = entry.at("kind").get<std::string>();
        auto name = entry.value("name", std::string{});
        if (kind == "qubit") {
            modes.push_back(Mode::qubit(std::move(name)));
        } else if (kind == "bosonic") {
            modes.push_back(Mode::bosonic(entry.at("cutoff").get<int>(), std::move(name)));
        } else {
            throw Error(ErrorKind::parse_error, "unknown mode kind '" + kind + "'");
        }
    }
    return ModeLayout(std::move(modes));
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorKind::parse_error, "complex number must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json state_to_json(const StateVector& state) {
    json amps = json::array();
    for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) amps.push_back(complex_to_json(state.amplitudes()(i)));
    return json{{"layout", layout_to_json(state.layout())}, {"amplitudes", std::move(amps)}};
}

StateVector state_from_json(const json& j) {
    try {
        auto layout = layout_from_json(j.at("layout"));
        const auto& amps = j.at("amplitudes");
        Vector v(static_cast<Eigen::Index>(amps.size()));
        for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(amps[i]);
        return StateVector(std::move(layout), std::move(v));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse_error, e.what());
    }
}

json density_to_json(const DensityMatrix& rho) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c) row.push_back(complex_to_json(rho.matrix()(r, c)));
        rows.push_back(std::move(row));
    }
    return json{{"layout", layout_to_json(rho.layout())}, {"matrix", std::move(rows)}};
}

DensityMatrix density_from_json(const json& j) {
    try {
        auto layout = layout_from_json(j.at("layout"));
        const auto& rows = j.at("matrix");
        const auto d = static_cast<Eigen::Index>(rows.size());
        Matrix m(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            if (static_cast<Eigen::Index>(rows[r].size()) != d) throw Error(ErrorKind::parse_error, "matrix not square");
            for (Eigen::Index c = 0; c < d; ++c) m(r, c) = complex_from_json(rows[r][c]);
        }
        return DensityMatrix(std::move(layout), std::move(m));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse_error, e.what());
    }
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io_error, "cannot open " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw Error(ErrorKind::io_error, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::io_error, "rename to " + path.string() + " failed: " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io_error, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace kerrlab::io
