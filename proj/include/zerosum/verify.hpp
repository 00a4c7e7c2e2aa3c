#pragma once

#include "zerosum/product.hpp"

#include <string>
#include <string_view>

namespace zerosum {

enum class VerifyReason { ok, not_a_subsequence, product_mismatch, invalid_element };

struct VerifyResult {
    bool ok = false;
    VerifyReason reason = VerifyReason::ok;
    std::string detail;
};

/// Checks a witness without touching the search code: the multiset is counted
/// directly and the ordered product is evaluated through the affine matrix
/// representation x^e y^a -> [[s^e, 0], [a, 1]] over Z_n plus the x-parity.
VerifyResult verify_witness(const Sequence & s, const ProductWitness & w, const Element & target);

std::string reason_name(VerifyReason r);

/// `witness k=<int> target=<element> : <element> <element> ...`
std::string format_witness_line(const ProductWitness & w);
ProductWitness parse_witness_line(std::string_view line, const GroupSpec & g, int line_number = 1);

} // namespace zerosum
