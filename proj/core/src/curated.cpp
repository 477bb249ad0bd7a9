#include "minigal/error.hpp"
#include "minigal/scenario.hpp"

namespace minigal {

namespace {

// Divisors u, t, t-1 of F(t, u), each with the two point refinements that
// make it visible: the second-stage coordinates at 0 and 1 are the
// non-C-pair witnesses for its first coordinate.
constexpr std::string_view u0 = R"(config p=5 ell=2 n=1 N=1
budget preset=default
field vars=t,u

flag#u: [curve "u"]
flag#u0: [curve "u", point "0"]
flag#u1: [curve "u", point "1"]
flag#t: [curve "t"]
flag#t0: [curve "t", point "0"]
flag#t1: [curve "t", point "1"]
flag#s: [curve "t - 1"]
flag#s0: [curve "t - 1", point "0"]
flag#s1: [curve "t - 1", point "1"]

fun#zero: level=1 terms=[]
fun#ord_u: level=1 terms=[(flag#u, 1, 1)]
fun#a: level=1 terms=[(flag#u0, 2, 1)]
fun#b: level=1 terms=[(flag#u1, 2, 1)]
fun#ord_t: level=1 terms=[(flag#t, 1, 1)]
fun#ord_t1: level=1 terms=[(flag#s, 1, 1)]
fun#c: level=1 terms=[(flag#t0, 2, 1)]
fun#c1: level=1 terms=[(flag#t1, 2, 1)]
fun#e: level=1 terms=[(flag#s0, 2, 1)]
fun#e1: level=1 terms=[(flag#s1, 2, 1)]

universe#U0: lower=[zero, ord_u, a, b, ord_t, ord_t1, c, c1, e, e1]

label#zero: visible_inertia=yes
label#ord_u: visible_inertia=yes
label#a: visible_inertia=no
label#b: visible_inertia=no
label#ord_t: visible_inertia=yes
label#ord_t1: visible_inertia=yes
label#c: visible_inertia=no
label#c1: visible_inertia=no
label#e: visible_inertia=no
label#e1: visible_inertia=no
)";

// Everything lives over the divisor u; one point is defined over F_25.
constexpr std::string_view u1 = R"(config p=5 ell=2 n=1 N=1
budget preset=default
field vars=t,u

flag#u: [curve "u"]
flag#u0: [curve "u", point "0"]
flag#u1: [curve "u", point "1"]
flag#u2: [curve "u", point "2"]
flag#ug: [curve "u", point "g2"]

fun#zero: level=1 terms=[]
fun#ord_u: level=1 terms=[(flag#u, 1, 1)]
fun#a: level=1 terms=[(flag#u0, 2, 1)]
fun#b: level=1 terms=[(flag#u1, 2, 1)]
fun#a2: level=1 terms=[(flag#u2, 2, 1)]
fun#ag: level=1 terms=[(flag#ug, 2, 1)]
fun#ab: level=1 terms=[(flag#u0, 2, 1), (flag#u1, 2, 1)]
fun#ua: level=1 terms=[(flag#u, 1, 1), (flag#u0, 2, 1)]
fun#ub: level=1 terms=[(flag#u, 1, 1), (flag#u1, 2, 1)]
fun#aba2: level=1 terms=[(flag#u0, 2, 1), (flag#u1, 2, 1), (flag#u2, 2, 1)]

universe#U1: lower=[zero, ord_u, a, b, a2, ag, ab, ua, ub, aba2]
)";

constexpr std::string_view kt = R"(config p=5 ell=2 n=1 N=1
budget preset=default
field vars=t

flag#t: [curve "t"]
flag#t1: [curve "t - 1"]
flag#t2: [curve "t - 2"]
flag#t4: [curve "t + 1"]

fun#zero: level=1 terms=[]
fun#ord_t: level=1 terms=[(flag#t, 1, 1)]
fun#ord_t1: level=1 terms=[(flag#t1, 1, 1)]
fun#ord_t2: level=1 terms=[(flag#t2, 1, 1)]
fun#ord_t4: level=1 terms=[(flag#t4, 1, 1)]
fun#sum: level=1 terms=[(flag#t, 1, 1), (flag#t1, 1, 1)]

universe#Kt: lower=[zero, ord_t, ord_t1, ord_t2, ord_t4, sum]
)";

constexpr std::string_view rank2 = R"(config p=5 ell=2 n=1 N=1
budget preset=default
field vars=t,u

flag#u: [curve "u"]
flag#u0: [curve "u", point "0"]
flag#u1: [curve "u", point "1"]
flag#t: [curve "t"]
flag#t0: [curve "t", point "0"]

fun#zero: level=1 terms=[]
fun#ord_u: level=1 terms=[(flag#u, 1, 1)]
fun#a: level=1 terms=[(flag#u0, 2, 1)]
fun#b: level=1 terms=[(flag#u1, 2, 1)]
fun#ua: level=1 terms=[(flag#u, 1, 1), (flag#u0, 2, 1)]
fun#ord_t: level=1 terms=[(flag#t, 1, 1)]
fun#c: level=1 terms=[(flag#t0, 2, 1)]

universe#R2: lower=[zero, ord_u, a, b, ua, ord_t, c]
)";

}  // namespace

std::string_view curated_declarations(std::string_view name)
{
    if (name == "u0") return u0;
    if (name == "u1") return u1;
    if (name == "kt") return kt;
    if (name == "rank2") return rank2;
    throw precondition_error("no curated universe named '" + std::string(name) + "'");
}

}  // namespace minigal
