//! Weighted sums of products of table factors, by variable elimination.
//!
//! A model has finitely many variables, each ranging over a finite domain
//! with a weight vector, and a list of factors, each a table over a subset of
//! the variables. Its value is the sum over all joint assignments of the
//! product of the variable weights and factor entries.

#[derive(Clone, Debug)]
pub(crate) struct Factor {
    /// Strictly increasing variable indices.
    pub vars: Vec<usize>,
    /// Row-major over `vars`, the last variable varying fastest.
    pub table: Vec<f64>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Model {
    pub weights: Vec<Vec<f64>>,
    pub factors: Vec<Factor>,
}

/// Greedy minimum-degree elimination order on the interaction graph of the
/// given scopes; ties go to the smallest index.
pub fn min_degree_order(n: usize, scopes: &[Vec<usize>]) -> Vec<usize> {
    let mut adj = vec![vec![false; n]; n];
    for s in scopes {
        for &a in s {
            for &b in s {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
    }
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let degree = |v: usize| (0..n).filter(|&u| alive[u] && adj[v][u]).count();
        let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (degree(v), v)).expect("a live vertex remains");
        let nbrs: Vec<usize> = (0..n).filter(|&u| alive[u] && adj[v][u]).collect();
        for &a in &nbrs {
            for &b in &nbrs {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
        alive[v] = false;
        order.push(v);
    }
    order
}

impl Model {
    fn dims(&self, vars: &[usize]) -> Vec<usize> {
        vars.iter().map(|&v| self.weights[v].len()).collect()
    }

    pub fn scopes(&self) -> Vec<Vec<usize>> {
        self.factors.iter().map(|f| f.vars.clone()).collect()
    }

    /// Sums out every variable in `order` (which must list each exactly once).
    pub fn eliminate(&self, order: &[usize]) -> f64 {
        let mut factors: Vec<Factor> = self.factors.clone();
        let mut scalar = 1.0;
        for &x in order {
            let (touching, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.vars.contains(&x));
            factors = rest;
            if touching.is_empty() {
                scalar *= self.weights[x].iter().sum::<f64>();
                continue;
            }
            let mut union: Vec<usize> = touching.iter().flat_map(|f| f.vars.iter().copied()).collect();
            union.sort_unstable();
            union.dedup();
            let dims = self.dims(&union);
            let xpos = union.iter().position(|&v| v == x).expect("x is in the union");
            let out_vars: Vec<usize> = union.iter().copied().filter(|&v| v != x).collect();
            let out_dims = self.dims(&out_vars);
            let out_size: usize = out_dims.iter().product();
            // strides of each touching factor and of the output, in union coordinates
            let strides: Vec<Vec<usize>> = touching.iter().map(|f| coordinate_strides(&union, &f.vars, &self.dims(&f.vars))).collect();
            let out_strides = coordinate_strides(&union, &out_vars, &out_dims);
            let mut out = vec![0.0; out_size];
            let mut idx = vec![0usize; union.len()];
            let mut fidx = vec![0usize; touching.len()];
            let mut oidx = 0usize;
            let wx = &self.weights[x];
            'odometer: loop {
                let mut p = wx[idx[xpos]];
                for (f, &i) in touching.iter().zip(&fidx) {
                    p *= f.table[i];
                }
                out[oidx] += p;
                let mut d = union.len();
                loop {
                    if d == 0 {
                        break 'odometer;
                    }
                    d -= 1;
                    idx[d] += 1;
                    for (k, s) in strides.iter().enumerate() {
                        fidx[k] += s[d];
                    }
                    oidx += out_strides[d];
                    if idx[d] < dims[d] {
                        break;
                    }
                    for (k, s) in strides.iter().enumerate() {
                        fidx[k] -= s[d] * dims[d];
                    }
                    oidx -= out_strides[d] * dims[d];
                    idx[d] = 0;
                }
            }
            if out_vars.is_empty() {
                scalar *= out[0];
            } else {
                factors.push(Factor { vars: out_vars, table: out });
            }
        }
        debug_assert!(factors.is_empty(), "every variable must be eliminated");
        scalar * factors.iter().map(|f| f.table[0]).product::<f64>()
    }

    pub fn evaluate(&self) -> f64 {
        self.eliminate(&min_degree_order(self.weights.len(), &self.scopes()))
    }

    /// Direct sum over every joint assignment, with compensated summation.
    pub fn brute_force(&self) -> f64 {
        let n = self.weights.len();
        let dims = self.dims(&(0..n).collect::<Vec<_>>());
        let mut idx = vec![0usize; n];
        let (mut total, mut carry) = (0.0f64, 0.0f64);
        loop {
            let mut p: f64 = (0..n).map(|v| self.weights[v][idx[v]]).product();
            for f in &self.factors {
                let mut i = 0;
                for &v in &f.vars {
                    i = i * dims[v] + idx[v];
                }
                p *= f.table[i];
            }
            let t = total + p;
            carry += if total.abs() >= p.abs() { (total - t) + p } else { (p - t) + total };
            total = t;
            let mut d = n;
            loop {
                if d == 0 {
                    return total + carry;
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < dims[d] {
                    break;
                }
                idx[d] = 0;
            }
        }
    }
}

/// For each coordinate of `union`, the table stride of that variable inside
/// a factor over `vars` (zero when the variable is absent).
fn coordinate_strides(union: &[usize], vars: &[usize], dims: &[usize]) -> Vec<usize> {
    let mut own = vec![0usize; vars.len()];
    let mut s = 1;
    for k in (0..vars.len()).rev() {
        own[k] = s;
        s *= dims[k];
    }
    union.iter().map(|v| vars.iter().position(|u| u == v).map_or(0, |k| own[k])).collect()
}
