#pragma once

#include "medf/bits.hpp"
#include "medf/code.hpp"
#include "medf/encode.hpp"
#include "medf/family.hpp"
#include "medf/nat.hpp"
#include "medf/ned.hpp"
#include "medf/product.hpp"
#include "medf/tree.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace medf {

using Json = nlohmann::json;

// Scalar conventions: naturals travel as decimal strings (they outgrow
// doubles fast; plain nonnegative JSON integers are accepted on input),
// bit strings as "0"/"1" text, words as arrays of naturals. Every parser
// throws InputError naming `where` on shape problems.
Json nat_to_json(const Nat& n);
Nat nat_from_json(const Json& j, const std::string& where);
std::uint64_t u64_from_json(const Json& j, const std::string& where);
Json bits_to_json(const Bits& s);
Bits bits_from_json(const Json& j, const std::string& where);
Json word_to_json(const Word& w);
Word word_from_json(const Json& j, const std::string& where);

// Rules: {"kind":"const","value":v} | {"kind":"affine","a":a,"b":b}
// meaning a + b*n | {"kind":"cycle","values":[...]} meaning
// values[n mod count].
Rule rule_from_json(const Json& j, const std::string& where);

// Family: array of rule specs, each with an extra "certBound"; the pairwise
// certificate is the larger of the two bounds. Not spot-checked here;
// callers decide when to pay for that.
EDFamily family_from_json(const Json& j, const std::string& where);

// Transducers: {"states":[name...], "start":name, "arity":n,
// "trans":[{"from":name,"bit":0|1,"to":name,"out":[...]}...]} with exactly
// one arc per (state, bit).
TransducerSpec transducer_from_json(const Json& j, const std::string& where);

// Codes: {"kind":"transducer",...} (arity 1) or {"kind":"table","depth":n,
// "table":[[bits,word]...],"tail":"repeat-last"|"zeros"}.
CodePtr code_from_json(const Json& j, const std::string& where);

// Product codes: {"kind":"transducer",...} (any arity) or
// {"kind":"const","out":[...]} (arity 0).
ProductCodePtr product_code_from_json(const Json& j, const std::string& where);

// Trees: {"kind":"full"} | {"kind":"seeded","seed":u,"maxPad":n} |
// {"kind":"table","depth":n,"rows":[[index,node]...]}.
SkeletonTree tree_from_json(const Json& j, const std::string& where);

// Ned instances: {"f":rule, "family":[{"fn":rule,"B":nat}...],
// "hStar":rule, "gStar":rule}.
NedInput ned_from_json(const Json& j, const std::string& where);

// Structured outputs.
Json tree_prefix_json(const SkeletonTree& tree, unsigned depth);
Json catch_trace_json(const CatchResult& result, unsigned depth);
Json product_result_json(const ProductCatchResult& result);

} // namespace medf
