//! Model files for the built-in catalog.

pub const POISSON: &str = r#"model "poisson"
parameter n > 2
parameter p > 0
independent x[n]
dependent u
lagrangian: grad2(u, u, x)/2 - powe(u, p + 1)/(p + 1)
dilation: x -> 1, u -> ?
critical p
equation u: lap(u, x, 1) + powo(u, p)
"#;

pub const POISSON_GENERAL: &str = r#"model "poisson_general"
parameter n > 2
independent x[n]
dependent u
lagrangian: grad2(u, u, x)/2 - F(u)
dilation: x -> 1, u -> ?
equation u: lap(u, x, 1) + diff(F(u), u)
"#;

pub const ODE_CLASS_E1: &str = r#"model "ode_class_e1"
parameter alpha
parameter beta > -1
parameter gamma
parameter mu
parameter p > 0
assume alpha - beta - 1 > 0
independent r[1]
dependent v
lagrangian: r^alpha*powe(v_{r}, beta + 2)/(beta + 2) - mu*r^gamma*powe(v, p + 1)/(p + 1)
dilation: r -> 1, v -> ?
critical p + 1
equation v: alpha*r^(alpha - 1)*powo(v_{r}, beta + 1) + (beta + 1)*r^alpha*powe(v_{r}, beta)*v_{r,r} +
  mu*r^gamma*powo(v, p)
"#;

pub const P_LAPLACE: &str = r#"model "p_laplace"
parameter n > 1
parameter p > 1
parameter q > 1
independent x[n]
dependent u
lagrangian: grad2(u, u, x)^(p/2)/p - powe(u, q)/q
dilation: x -> 1, u -> ?
critical q
"#;

pub const POLYHARMONIC_EVEN: &str = r#"model "polyharmonic_even"
parameter n > 0
parameter k > 0
parameter p > 0
assume n - 2*k > 0
independent x[n]
dependent u
lagrangian: lap(u, x, k/2)^2/2 - powe(u, p + 1)/(p + 1)
dilation: x -> 1, u -> ?
critical p
equation u: lap(u, x, k) - powo(u, p)
"#;

pub const BAOUENDI_GRUSHIN: &str = r#"model "baouendi_grushin"
parameter n >= 1
parameter m >= 1
parameter alpha > 0
parameter p > 0
independent x[n]
independent y[m]
dependent u
lagrangian: grad2(u, u, x)/2 + norm2(x)^alpha*grad2(u, u, y)/2 - powe(u, p + 1)/(p + 1)
dilation: x -> 1, y -> alpha + 1, u -> ?
critical p
equation u: lap(u, x, 1) + norm2(x)^alpha*lap(u, y, 1) + powo(u, p)
"#;

pub const KOHN_LAPLACE: &str = r#"model "kohn_laplace"
parameter n >= 1
parameter p > 0
independent x[n]
independent y[n]
independent t[1]
dependent u
lagrangian: grad2(u, u, x)/2 + grad2(u, u, y)/2 + 2*(norm2(x) + norm2(y))*grad2(u, u, t) +
  2*cdot(y, u, x)*u_{t} - 2*cdot(x, u, y)*u_{t} - powe(u, p + 1)/(p + 1)
dilation: x -> 1, y -> 1, t -> 2, u -> ?
critical p
"#;

pub const POTENTIAL_SYSTEM: &str = r#"model "potential_system"
parameter n > 2
independent x[n]
dependent u1, u2
lagrangian: grad2(u1, u1, x)/2 + grad2(u2, u2, x)/2 - F(u1, u2)
dilation: x -> 1, u1 -> ?, u2 -> ?
equation u1: lap(u1, x, 1) + diff(F(u1, u2), u1)
equation u2: lap(u2, x, 1) + diff(F(u1, u2), u2)
"#;

pub const POTENTIAL_POWER: &str = r#"model "potential_system_power"
parameter n > 2
parameter p > 0
independent x[n]
dependent u1, u2
lagrangian: grad2(u1, u1, x)/2 + grad2(u2, u2, x)/2 - powe(u1, p + 1)/(p + 1) - powe(u2, p + 1)/(p + 1)
dilation: x -> 1, u1 -> ?, u2 -> ?
critical p
"#;

pub const HAMILTONIAN_SYSTEM: &str = r#"model "hamiltonian_system"
parameter n > 2
independent x[n]
dependent u, v
lagrangian: grad2(u, v, x) - H(u, v)
dilation: x -> 1, u -> ?, v -> ?
equation u: lap(v, x, 1) + diff(H(u, v), u)
equation v: lap(u, x, 1) + diff(H(u, v), v)
"#;

pub const LANE_EMDEN_SYSTEM: &str = r#"model "lane_emden_system"
parameter n > 2
parameter p > 0
parameter q > 0
independent x[n]
dependent u, v
lagrangian: grad2(u, v, x) - powe(u, q + 1)/(q + 1) - powe(v, p + 1)/(p + 1)
dilation: x -> 1, u -> ?, v -> ?
critical p, q
equation u: lap(v, x, 1) + powo(u, q)
equation v: lap(u, x, 1) + powo(v, p)
"#;

pub const MIXED_SYSTEM: &str = r#"model "mixed_system"
parameter n > 2
independent x[n]
dependent u, v, w
lagrangian: grad2(u, v, x) + grad2(w, w, x)/2 - H(u, v, w)
dilation: x -> 1, u -> ?, v -> ?, w -> ?
equation u: lap(v, x, 1) + diff(H(u, v, w), u)
equation v: lap(u, x, 1) + diff(H(u, v, w), v)
equation w: lap(w, x, 1) + diff(H(u, v, w), w)
"#;

pub const MIXED_POWER: &str = r#"model "mixed_system_power"
parameter n > 2
parameter p > 0
parameter q > 0
parameter s > 0
independent x[n]
dependent u, v, w
lagrangian: grad2(u, v, x) + grad2(w, w, x)/2 - powe(u, q + 1)/(q + 1) - powe(v, p + 1)/(p + 1) -
  powe(w, s + 1)/(s + 1)
dilation: x -> 1, u -> ?, v -> ?, w -> ?
critical p, q, s
"#;

pub const HYPERBOLIC_HAMILTONIAN: &str = r#"model "hyperbolic_hamiltonian"
parameter n > 1
independent t[1]
independent x[n]
dependent u, v
lagrangian: u_{t}*v_{t} - grad2(u, v, x) - H(u, v)
dilation: t -> 1, x -> 1, u -> ?, v -> ?
equation u: v_{t,t} - lap(v, x, 1) + diff(H(u, v), u)
equation v: u_{t,t} - lap(u, x, 1) + diff(H(u, v), v)
"#;

pub const HYPERBOLIC_POWER: &str = r#"model "hyperbolic_hamiltonian_power"
parameter n > 1
parameter p > 0
parameter q > 0
independent t[1]
independent x[n]
dependent u, v
lagrangian: u_{t}*v_{t} - grad2(u, v, x) - powe(u, q + 1)/(q + 1) - powe(v, p + 1)/(p + 1)
dilation: t -> 1, x -> 1, u -> ?, v -> ?
critical p, q
"#;

pub const PARABOLIC_HAMILTONIAN: &str = r#"model "parabolic_hamiltonian"
parameter n > 0
independent t[1]
independent x[n]
dependent u, v
lagrangian: (v*u_{t} - u*v_{t})/2 + grad2(u, v, x) - H(u, v)
dilation: t -> 2, x -> 1, u -> ?, v -> ?
equation u: -v_{t} - lap(v, x, 1) - diff(H(u, v), u)
equation v: u_{t} - lap(u, x, 1) - diff(H(u, v), v)
"#;

pub const PARABOLIC_POWER: &str = r#"model "parabolic_hamiltonian_power"
parameter n > 0
parameter p > 0
parameter q > 0
independent t[1]
independent x[n]
dependent u, v
lagrangian: (v*u_{t} - u*v_{t})/2 + grad2(u, v, x) - powe(u, q + 1)/(q + 1) - powe(v, p + 1)/(p + 1)
dilation: t -> 2, x -> 1, u -> ?, v -> ?
critical p, q
"#;
