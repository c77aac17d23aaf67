#pragma once

#include <string>

#include <json.hpp>

#include "pregret/downstream.hpp"
#include "pregret/modulus.hpp"
#include "pregret/order.hpp"
#include "pregret/proper_loss.hpp"

namespace pregret {

// ordered_json keeps key order stable so emitted files are byte-reproducible
using Json = nlohmann::ordered_json;

// 17 significant digits, '.' decimal point, no locale.
std::string format_double(double v);

// Header r,omega,method,heuristic; LF line endings.
std::string curve_csv(const ModulusCurve& curve);

// Two-curve comparison (closed form vs brute force) with an agreement column.
std::string curve_comparison_csv(const ModulusCurve& closed, const ModulusCurve& brute);

Json curve_json(const ModulusCurve& curve);  // includes minimizers

// Header r,omega,sigma,K.
std::string profile_csv(const OrderProfile& profile);

// {kappa, limsup_sigma, liminf_sigma, C1, C2, pass}
Json barrier_json(const BarrierReport& report);

Json witness_json(const Witness& w);

// {family, alpha, N, p, pass, worst_witness, margin}
Json report_json(const CertReport& report);
Json report_json(const StrongPropernessReport& report);

Json chain_json(const ChainReport& report);

}  // namespace pregret
