// SPDX-License-Identifier: Apache-2.0

#include "polarcat/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace polarcat {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

nlohmann::json register_to_json(const ModeRegister& reg) {
    nlohmann::json modes = nlohmann::json::array();
    nlohmann::json cutoffs = nlohmann::json::array();
    for (const auto& m : reg.modes()) {
        modes.push_back(m.label);
        cutoffs.push_back(m.cutoff);
    }
    return nlohmann::json{{"modes", modes}, {"cutoffs", cutoffs}};
}

ModeRegister register_from_json(const nlohmann::json& j) {
    std::vector<Mode> modes;
    const auto& labels = j.at("modes");
    const auto& cutoffs = j.at("cutoffs");
    if (labels.size() != cutoffs.size())
        throw DimensionMismatch("modes/cutoffs length mismatch in JSON");
    for (std::size_t i = 0; i < labels.size(); ++i)
        modes.push_back({labels[i].get<std::string>(), cutoffs[i].get<int>()});
    return ModeRegister(std::move(modes));
}

}  // namespace

nlohmann::json density_to_json(const DensityOperator& rho) {
    nlohmann::json j = register_to_json(rho.reg());
    nlohmann::json matrix = nlohmann::json::array();
    for (long r = 0; r < rho.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (long c = 0; c < rho.dim(); ++c)
            row.push_back({rho.matrix()(r, c).real(), rho.matrix()(r, c).imag()});
        matrix.push_back(std::move(row));
    }
    j["matrix"] = std::move(matrix);
    return j;
}

DensityOperator density_from_json(const nlohmann::json& j) {
    ModeRegister reg = register_from_json(j);
    const auto& matrix = j.at("matrix");
    const long d = reg.dim();
    if (long(matrix.size()) != d)
        throw DimensionMismatch("JSON matrix does not match register dimension");
    MatrixXcd m(d, d);
    for (long r = 0; r < d; ++r) {
        const auto& row = matrix[r];
        if (long(row.size()) != d) throw DimensionMismatch("ragged JSON matrix");
        for (long c = 0; c < d; ++c)
            m(r, c) = cplx(row[c][0].get<double>(), row[c][1].get<double>());
    }
    return DensityOperator(std::move(reg), std::move(m));
}

nlohmann::json fock_to_json(const FockVector& psi) {
    nlohmann::json j = register_to_json(psi.reg());
    nlohmann::json amps = nlohmann::json::array();
    for (long i = 0; i < psi.dim(); ++i)
        amps.push_back({psi.amps()(i).real(), psi.amps()(i).imag()});
    j["amps"] = std::move(amps);
    return j;
}

FockVector fock_from_json(const nlohmann::json& j) {
    ModeRegister reg = register_from_json(j);
    const auto& amps = j.at("amps");
    if (long(amps.size()) != reg.dim())
        throw DimensionMismatch("JSON amps do not match register dimension");
    VectorXcd v(reg.dim());
    for (long i = 0; i < v.size(); ++i)
        v(i) = cplx(amps[i][0].get<double>(), amps[i][1].get<double>());
    return FockVector(std::move(reg), std::move(v));
}

std::string quadratures_to_csv(const std::vector<QuadratureSample>& samples) {
    std::string out = "theta,x\n";
    for (const auto& s : samples) out += fmt17(s.theta) + "," + fmt17(s.x) + "\n";
    return out;
}

std::vector<QuadratureSample> quadratures_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "theta,x")
        throw DimensionMismatch("quadrature CSV must start with 'theta,x'");
    std::vector<QuadratureSample> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DimensionMismatch("malformed quadrature CSV row: " + line);
        samples.push_back(
            {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    return samples;
}

std::string wigner_to_csv(const Eigen::MatrixXd& w, const WignerGrid& grid) {
    const double dx = (grid.x_max - grid.x_min) / (grid.n - 1);
    const double dp = (grid.p_max - grid.p_min) / (grid.n - 1);
    std::string out = "x,p,w\n";
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            out += fmt17(grid.x_min + i * dx) + "," + fmt17(grid.p_min + j * dp) + "," +
                   fmt17(w(i, j)) + "\n";
    return out;
}

std::string bloch_map_to_csv(const std::vector<BlochPoint>& map) {
    std::string out = "theta,phi,fidelity\n";
    for (const auto& p : map)
        out += fmt17(p.theta) + "," + fmt17(p.phi) + "," + fmt17(p.fidelity) + "\n";
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace polarcat
