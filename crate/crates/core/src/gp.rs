//! Expression-tree genotypes: evaluation, random growth, subtree crossover and
//! mutation under size and depth caps, prefix text form.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Binary arithmetic operator. Division is protected: `x / 0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub const ALL: [BinOp; 4] = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    pub fn apply<S: Scalar>(self, a: S, b: S) -> S {
        match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => {
                if b == S::zero() {
                    S::one()
                } else {
                    a / b
                }
            }
        }
    }

    fn from_symbol(s: &str) -> Option<BinOp> {
        BinOp::ALL.into_iter().find(|op| op.symbol() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprTree<S> {
    Const(S),
    /// Variable `x{index}`.
    Var(usize),
    Op(BinOp, Box<ExprTree<S>>, Box<ExprTree<S>>),
}

impl<S: Scalar> ExprTree<S> {
    pub fn op(op: BinOp, a: ExprTree<S>, b: ExprTree<S>) -> Self {
        ExprTree::Op(op, Box::new(a), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            ExprTree::Op(_, a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    /// A single leaf has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            ExprTree::Op(_, a, b) => 1 + a.depth().max(b.depth()),
            _ => 1,
        }
    }

    pub fn is_terminal(&self) -> bool {
        !matches!(self, ExprTree::Op(..))
    }

    pub fn eval(&self, env: &[S]) -> Result<S> {
        match self {
            ExprTree::Const(c) => Ok(*c),
            ExprTree::Var(i) => env.get(*i).copied().ok_or(Error::UnboundVariable(*i)),
            ExprTree::Op(op, a, b) => Ok(op.apply(a.eval(env)?, b.eval(env)?)),
        }
    }

    /// Node `index` in preorder.
    pub fn node(&self, index: usize) -> Option<&ExprTree<S>> {
        if index == 0 {
            return Some(self);
        }
        match self {
            ExprTree::Op(_, a, b) => {
                let left = a.size();
                if index <= left {
                    a.node(index - 1)
                } else {
                    b.node(index - 1 - left)
                }
            }
            _ => None,
        }
    }

    /// Depth of preorder node `index` (root is 1).
    pub fn node_depth(&self, index: usize) -> Option<usize> {
        if index == 0 {
            return Some(1);
        }
        match self {
            ExprTree::Op(_, a, b) => {
                let left = a.size();
                let d = if index <= left { a.node_depth(index - 1) } else { b.node_depth(index - 1 - left) };
                d.map(|d| d + 1)
            }
            _ => None,
        }
    }

    /// Copy with preorder node `index` replaced by `sub`.
    pub fn replaced(&self, index: usize, sub: ExprTree<S>) -> ExprTree<S> {
        if index == 0 {
            return sub;
        }
        match self {
            ExprTree::Op(op, a, b) => {
                let left = a.size();
                if index <= left {
                    ExprTree::Op(*op, Box::new(a.replaced(index - 1, sub)), b.clone())
                } else {
                    ExprTree::Op(*op, a.clone(), Box::new(b.replaced(index - 1 - left, sub)))
                }
            }
            leaf => leaf.clone(),
        }
    }

    /// Size and depth caps plus variable indices in range.
    pub fn is_valid(&self, cfg: &GpConfig<S>) -> bool {
        self.size() <= cfg.max_size && self.depth() <= cfg.max_depth && self.vars_below(cfg.n_vars)
    }

    fn vars_below(&self, n: usize) -> bool {
        match self {
            ExprTree::Const(_) => true,
            ExprTree::Var(i) => *i < n,
            ExprTree::Op(_, a, b) => a.vars_below(n) && b.vars_below(n),
        }
    }
}

impl<S: Scalar> fmt::Display for ExprTree<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprTree::Const(c) => write!(f, "{c}"),
            ExprTree::Var(i) => write!(f, "x{i}"),
            ExprTree::Op(op, a, b) => write!(f, "({} {a} {b})", op.symbol()),
        }
    }
}

impl<S: Scalar> FromStr for ExprTree<S> {
    type Err = Error;

    /// Parses prefix text such as `(- (/ (* x0 3) 5) 1)`; `x` is read as `x0`.
    fn from_str(s: &str) -> Result<Self> {
        let spaced = s.replace('(', " ( ").replace(')', " ) ");
        let tokens: Vec<&str> = spaced.split_whitespace().collect();
        let mut pos = 0;
        let tree = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input after position {pos}")));
        }
        Ok(tree)
    }
}

fn parse_expr<S: Scalar>(tokens: &[&str], pos: &mut usize) -> Result<ExprTree<S>> {
    let tok = *tokens.get(*pos).ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
    *pos += 1;
    if tok == "(" {
        let sym = *tokens.get(*pos).ok_or_else(|| Error::Parse("missing operator".into()))?;
        let op = BinOp::from_symbol(sym).ok_or_else(|| Error::Parse(format!("unknown operator {sym:?}")))?;
        *pos += 1;
        let a = parse_expr(tokens, pos)?;
        let b = parse_expr(tokens, pos)?;
        if tokens.get(*pos) != Some(&")") {
            return Err(Error::Parse(format!("expected ')' after operands of {sym}")));
        }
        *pos += 1;
        return Ok(ExprTree::op(op, a, b));
    }
    if tok == ")" {
        return Err(Error::Parse("unexpected ')'".into()));
    }
    if tok == "x" {
        return Ok(ExprTree::Var(0));
    }
    if let Some(idx) = tok.strip_prefix('x') {
        return idx.parse().map(ExprTree::Var).map_err(|_| Error::Parse(format!("bad variable {tok:?}")));
    }
    tok.parse::<S>().map(ExprTree::Const).map_err(|_| Error::Parse(format!("bad constant {tok:?}")))
}

/// How mutation rewrites a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GpMutation {
    /// Replace a uniformly chosen node by a fresh random subtree.
    #[default]
    Subtree,
    /// Redraw one uniformly chosen terminal from the terminal set.
    Terminal,
}

/// Primitive set and caps.
#[derive(Debug, Clone, PartialEq)]
pub struct GpConfig<S> {
    pub n_vars: usize,
    pub constants: Vec<S>,
    pub functions: Vec<BinOp>,
    pub max_size: usize,
    pub max_depth: usize,
    pub mutation: GpMutation,
}

impl<S: Scalar> GpConfig<S> {
    /// Terminals `{x, 1, 3, 5}` and functions `{+, -, *, /}`.
    pub fn default_for(n_vars: usize) -> Self {
        GpConfig {
            n_vars,
            constants: vec![S::lit(1.0), S::lit(3.0), S::lit(5.0)],
            functions: BinOp::ALL.to_vec(),
            max_size: 31,
            max_depth: 6,
            mutation: GpMutation::Subtree,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_vars + self.constants.len() == 0 {
            return Err(invalid("terminal set is empty"));
        }
        if self.max_size == 0 || self.max_depth == 0 {
            return Err(invalid("size and depth caps must be at least 1"));
        }
        Ok(())
    }

    fn terminal_count(&self) -> usize {
        self.n_vars + self.constants.len()
    }

    fn random_terminal<R: Rng + ?Sized>(&self, rng: &mut R) -> ExprTree<S> {
        let k = rng.random_range(0..self.terminal_count());
        if k < self.n_vars {
            ExprTree::Var(k)
        } else {
            ExprTree::Const(self.constants[k - self.n_vars])
        }
    }
}

/// Grow-style random tree within `max_depth` and `max_size`: each node is a
/// function with probability `|F| / (|F| + |T|)` unless a cap forces a terminal.
pub fn random_tree<S: Scalar, R: Rng + ?Sized>(cfg: &GpConfig<S>, rng: &mut R) -> ExprTree<S> {
    grow(cfg, cfg.max_depth, cfg.max_size, rng)
}

fn grow<S: Scalar, R: Rng + ?Sized>(cfg: &GpConfig<S>, depth: usize, budget: usize, rng: &mut R) -> ExprTree<S> {
    let nf = cfg.functions.len();
    let forced_leaf = depth <= 1 || budget < 3 || nf == 0;
    if forced_leaf || rng.random_range(0..nf + cfg.terminal_count()) >= nf {
        return cfg.random_terminal(rng);
    }
    let op = cfg.functions[rng.random_range(0..nf)];
    let a = grow(cfg, depth - 1, budget - 2, rng);
    let b = grow(cfg, depth - 1, budget - 1 - a.size(), rng);
    ExprTree::op(op, a, b)
}

/// Swaps the subtrees rooted at preorder nodes `i` of `t1` and `j` of `t2`. A
/// child breaking a cap is replaced by a copy of its parent.
pub fn subtree_cross_at<S: Scalar>(
    t1: &ExprTree<S>,
    t2: &ExprTree<S>,
    i: usize,
    j: usize,
    cfg: &GpConfig<S>,
) -> (ExprTree<S>, ExprTree<S>) {
    let s1 = t1.node(i).expect("node index within tree").clone();
    let s2 = t2.node(j).expect("node index within tree").clone();
    let c1 = t1.replaced(i, s2);
    let c2 = t2.replaced(j, s1);
    let c1 = if c1.is_valid(cfg) { c1 } else { t1.clone() };
    let c2 = if c2.is_valid(cfg) { c2 } else { t2.clone() };
    (c1, c2)
}

/// Subtree crossover at uniformly chosen nodes.
pub fn subtree_cross<S: Scalar, R: Rng + ?Sized>(
    t1: &ExprTree<S>,
    t2: &ExprTree<S>,
    cfg: &GpConfig<S>,
    rng: &mut R,
) -> (ExprTree<S>, ExprTree<S>) {
    let i = rng.random_range(0..t1.size());
    let j = rng.random_range(0..t2.size());
    subtree_cross_at(t1, t2, i, j, cfg)
}

/// Rewrites one uniformly chosen node according to `cfg.mutation`.
pub fn subtree_mutate<S: Scalar, R: Rng + ?Sized>(t: &ExprTree<S>, cfg: &GpConfig<S>, rng: &mut R) -> ExprTree<S> {
    match cfg.mutation {
        GpMutation::Subtree => {
            let i = rng.random_range(0..t.size());
            let node = t.node(i).expect("node index within tree");
            let depth_left = (cfg.max_depth + 1).saturating_sub(t.node_depth(i).expect("node exists"));
            let budget = cfg.max_size.saturating_sub(t.size() - node.size());
            let fresh = grow(cfg, depth_left.max(1), budget.max(1), rng);
            t.replaced(i, fresh)
        }
        GpMutation::Terminal => {
            let leaves: Vec<usize> = (0..t.size()).filter(|&i| t.node(i).is_some_and(|n| n.is_terminal())).collect();
            let i = leaves[rng.random_range(0..leaves.len())];
            t.replaced(i, cfg.random_terminal(rng))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn cfg() -> GpConfig<f64> {
        GpConfig { max_size: 15, max_depth: 4, ..GpConfig::default_for(1) }
    }

    // Stack machine over the reversed prefix token stream.
    fn eval_prefix(text: &str, x: f64) -> f64 {
        let spaced = text.replace(['(', ')'], " ");
        let mut stack: Vec<f64> = Vec::new();
        for tok in spaced.split_whitespace().rev() {
            let v = match tok {
                "+" | "-" | "*" | "/" => {
                    let a = stack.pop().unwrap();
                    let b = stack.pop().unwrap();
                    match tok {
                        "+" => a + b,
                        "-" => a - b,
                        "*" => a * b,
                        _ if b == 0.0 => 1.0,
                        _ => a / b,
                    }
                }
                "x0" => x,
                c => c.parse().unwrap(),
            };
            stack.push(v);
        }
        assert_eq!(stack.len(), 1);
        stack[0]
    }

    #[test]
    fn example_expression() {
        let t: ExprTree<f64> = "(- (/ (* x 3) 5) 1)".parse().unwrap();
        assert_eq!(t.eval(&[5.0]).unwrap(), 2.0);
        assert_eq!(t.to_string(), "(- (/ (* x0 3) 5) 1)");
        assert_eq!(t.size(), 7);
        assert_eq!(t.depth(), 4);
    }

    #[test]
    fn constants_and_unbound() {
        let c = ExprTree::Const(7.0);
        assert_eq!(c.eval(&[]).unwrap(), 7.0);
        assert_eq!(c.eval(&[1.0, 2.0]).unwrap(), 7.0);
        assert_eq!(ExprTree::<f64>::Var(2).eval(&[1.0]).unwrap_err(), Error::UnboundVariable(2));
        let d = ExprTree::op(BinOp::Div, ExprTree::Var(0), ExprTree::Const(0.0));
        assert_eq!(d.eval(&[4.0]).unwrap(), 1.0);
    }

    #[test]
    fn parse_errors() {
        assert!("(+ 1)".parse::<ExprTree<f64>>().is_err());
        assert!("(^ 1 2)".parse::<ExprTree<f64>>().is_err());
        assert!("1 2".parse::<ExprTree<f64>>().is_err());
        assert!("".parse::<ExprTree<f64>>().is_err());
    }

    #[test]
    fn random_trees_round_trip_and_match_stack_evaluator() {
        let cfg = cfg();
        let mut rng = seeded(4);
        for _ in 0..2000 {
            let t = random_tree(&cfg, &mut rng);
            assert!(t.is_valid(&cfg));
            let back: ExprTree<f64> = t.to_string().parse().unwrap();
            assert_eq!(back, t);
            let x = rng.random_range(-3.0..3.0);
            let a = t.eval(&[x]).unwrap();
            let b = eval_prefix(&t.to_string(), x);
            assert!(a == b || (a.is_nan() && b.is_nan()), "{t}: {a} vs {b}");
        }
    }

    #[test]
    fn depth_one_is_terminal() {
        let cfg = GpConfig { max_depth: 1, ..cfg() };
        let mut rng = seeded(1);
        for _ in 0..200 {
            assert!(random_tree(&cfg, &mut rng).is_terminal());
        }
        let a = random_tree(&cfg, &mut seeded(8));
        let b = random_tree(&cfg, &mut seeded(8));
        assert_eq!(a, b);
    }

    #[test]
    fn root_crossover_swaps_whole_trees() {
        let cfg = cfg();
        let t1: ExprTree<f64> = "(+ x0 1)".parse().unwrap();
        let t2: ExprTree<f64> = "(* 3 5)".parse().unwrap();
        let (c1, c2) = subtree_cross_at(&t1, &t2, 0, 0, &cfg);
        assert_eq!((c1, c2), (t2, t1));
    }

    #[test]
    fn oversize_child_falls_back_to_parent() {
        let cfg = GpConfig { max_size: 5, ..cfg() };
        let t1: ExprTree<f64> = "(+ x0 1)".parse().unwrap();
        let t2: ExprTree<f64> = "(* (+ 3 5) x0)".parse().unwrap();
        // t1 with its leaf x0 replaced by t2 has size 7
        let (c1, c2) = subtree_cross_at(&t1, &t2, 1, 4, &cfg);
        assert_eq!(c1, "(+ x0 1)".parse().unwrap());
        assert_eq!(c2, "(* (+ 3 5) x0)".parse().unwrap());
        let (c1, _) = subtree_cross_at(&t1, &t2, 1, 0, &cfg);
        assert_eq!(c1, t1);
    }

    #[test]
    fn operators_respect_caps() {
        let cfg = cfg();
        let mut rng = seeded(12);
        let mut pool: Vec<ExprTree<f64>> = (0..20).map(|_| random_tree(&cfg, &mut rng)).collect();
        for k in 0..5000 {
            let a = rng.random_range(0..pool.len());
            let b = rng.random_range(0..pool.len());
            let (c1, c2) = subtree_cross(&pool[a], &pool[b], &cfg, &mut rng);
            let m = subtree_mutate(&c1, &cfg, &mut rng);
            for t in [&c1, &c2, &m] {
                assert!(t.is_valid(&cfg), "{t}");
            }
            pool[k % 20] = m;
        }
    }

    #[test]
    fn size_one_cap_mutates_to_terminal() {
        let cfg = GpConfig { max_size: 1, ..cfg() };
        let mut rng = seeded(3);
        let t = ExprTree::Const(1.0);
        for _ in 0..100 {
            assert!(subtree_mutate(&t, &cfg, &mut rng).is_terminal());
        }
    }

    #[test]
    fn terminal_mutation_keeps_shape() {
        let cfg = GpConfig { mutation: GpMutation::Terminal, ..cfg() };
        let t: ExprTree<f64> = "(+ (* x0 3) 1)".parse().unwrap();
        let mut rng = seeded(5);
        for _ in 0..100 {
            let m = subtree_mutate(&t, &cfg, &mut rng);
            assert_eq!(m.size(), t.size());
            assert_eq!(m.depth(), t.depth());
        }
    }
}
