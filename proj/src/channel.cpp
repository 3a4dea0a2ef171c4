#include "abc/channel.hpp"

#include <algorithm>

#include "json.hpp"

namespace abc {

ChannelPair::ChannelPair(StochasticMatrix a, StochasticMatrix b) : w1(std::move(a)), w2(std::move(b)) {
    if (w1.in_size != w2.in_size)
        throw ValidationError("ChannelPair: W1 and W2 disagree on the input alphabet");
}

std::size_t ChannelPair::aux_size_region() const {
    return std::min(nx(), ny() + nz() - 1);
}

std::size_t ChannelPair::aux_size_omega() const {
    return ny() + nz() - 1;
}

std::size_t ChannelPair::aux_size_loose() const {
    return std::min(nx(), ny() + nz()) + 1;
}

namespace {

StochasticMatrix parse_matrix(const nlohmann::json& j, const char* name, std::size_t rows,
                              std::size_t cols) {
    if (!j.is_array() || j.size() != rows)
        throw ValidationError(std::string(name) + ": expected " + std::to_string(rows) + " rows");
    std::vector<double> w;
    w.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || row.size() != cols)
            throw ValidationError(std::string(name) + " row " + std::to_string(r) + ": expected " +
                                  std::to_string(cols) + " columns");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!row[c].is_number())
                throw ValidationError(std::string(name) + " entry (" + std::to_string(r) + "," +
                                      std::to_string(c) + "): not a number");
            double v = row[c].get<double>();
            if (v < 0.0)
                throw ValidationError(std::string(name) + " entry (" + std::to_string(r) + "," +
                                      std::to_string(c) + "): negative");
            w.push_back(v);
        }
    }
    try {
        return StochasticMatrix(rows, cols, std::move(w));
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(name) + ": " + e.what());
    }
}

}  // namespace

ChannelPair parse_channel_spec(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("channel spec: ") + e.what());
    }
    for (const char* key : {"X", "Y", "Z", "W1", "W2"})
        if (!j.contains(key)) throw ValidationError(std::string("channel spec: missing key ") + key);
    auto dim = [&](const char* key) {
        if (!j[key].is_number_integer() || j[key].get<long>() < 1)
            throw ValidationError(std::string("channel spec: ") + key + " must be a positive integer");
        return j[key].get<std::size_t>();
    };
    std::size_t nx = dim("X"), ny = dim("Y"), nz = dim("Z");
    return ChannelPair(parse_matrix(j["W1"], "W1", nx, ny), parse_matrix(j["W2"], "W2", nx, nz));
}

JointDistUXYZ joint_from_aux(const AuxInputLaw& aux, const ChannelPair& ch) {
    if (aux.p_xgu.in_size != aux.nu() || aux.p_xgu.out_size != ch.nx())
        throw ValidationError("joint_from_aux: dimension mismatch");
    JointDistUXYZ q(aux.nu(), ch.nx(), ch.ny(), ch.nz());
    for (std::size_t u = 0; u < q.nu; ++u)
        for (std::size_t x = 0; x < q.nx; ++x) {
            double pux = aux.p_u[u] * aux.p_xgu(u, x);
            if (pux == 0.0) continue;
            for (std::size_t y = 0; y < q.ny; ++y) {
                double puxy = pux * ch.w1(x, y);
                if (puxy == 0.0) continue;
                for (std::size_t z = 0; z < q.nz; ++z)
                    q.at(u, x, y, z) = puxy * ch.w2(x, z);
            }
        }
    return q;
}

}  // namespace abc
