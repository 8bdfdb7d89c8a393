//! Parameter symbols: constants, quasiconstants with a finite derivative
//! chain, and square-root symbols with a declared square.
//!
//! Symbols live in a process-wide append-only table. A handle is a plain
//! index, so monomials stay `Copy`-cheap; the table is only read after a
//! symbol is created.

use std::fmt;
use std::sync::{LazyLock, RwLock};

use super::rational::Q;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol(u32);

#[derive(Clone, Debug)]
struct SymbolData {
    name: String,
    d_image: Option<Symbol>,
    square: Option<Q>,
}

static TABLE: LazyLock<RwLock<Vec<SymbolData>>> = LazyLock::new(|| RwLock::new(Vec::new()));

impl Symbol {
    fn register(data: SymbolData) -> Symbol {
        let mut table = TABLE.write().expect("symbol table poisoned");
        table.push(data);
        Symbol((table.len() - 1) as u32)
    }

    /// A constant symbol: `D s = 0`.
    pub fn constant(name: &str) -> Symbol {
        Symbol::register(SymbolData { name: name.to_string(), d_image: None, square: None })
    }

    /// A quasiconstant whose total derivative is `d_image`.
    pub fn with_derivative(name: &str, d_image: Symbol) -> Symbol {
        Symbol::register(SymbolData { name: name.to_string(), d_image: Some(d_image), square: None })
    }

    /// A constant symbol `s` with `s^2 = square`, e.g. `sqrt2` with square 2.
    pub fn square_root(name: &str, square: Q) -> Symbol {
        assert!(!square.is_zero(), "square reduction to zero");
        Symbol::register(SymbolData { name: name.to_string(), d_image: None, square: Some(square) })
    }

    /// Quasiconstant `c(x)` whose `(k+1)`-th derivative vanishes.
    ///
    /// Returns `[c, c', ..., c^(k)]`; the derivative symbols are named with
    /// trailing primes so they print back as derivatives of `c`.
    pub fn chain(name: &str, k: usize) -> Vec<Symbol> {
        let mut syms = Vec::with_capacity(k + 1);
        let mut below = Symbol::constant(&format!("{name}{}", "'".repeat(k)));
        syms.push(below);
        for i in (0..k).rev() {
            below = Symbol::with_derivative(&format!("{name}{}", "'".repeat(i)), below);
            syms.push(below);
        }
        syms.reverse();
        syms
    }

    fn with<R>(self, f: impl FnOnce(&SymbolData) -> R) -> R {
        let table = TABLE.read().expect("symbol table poisoned");
        f(&table[self.0 as usize])
    }

    pub fn name(self) -> String {
        self.with(|d| d.name.clone())
    }

    pub fn d_image(self) -> Option<Symbol> {
        self.with(|d| d.d_image)
    }

    pub fn square(self) -> Option<Q> {
        self.with(|d| d.square.clone())
    }

    pub fn is_constant(self) -> bool {
        self.d_image().is_none()
    }

    /// Some symbol whose derivative is `self`, if one was declared.
    pub fn antiderivative(self) -> Option<Symbol> {
        let table = TABLE.read().expect("symbol table poisoned");
        table.iter().position(|d| d.d_image == Some(self)).map(|i| Symbol(i as u32))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_links_derivatives() {
        let c = Symbol::chain("c", 2);
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].d_image(), Some(c[1]));
        assert_eq!(c[1].d_image(), Some(c[2]));
        assert_eq!(c[2].d_image(), None);
        assert_eq!(c[1].name(), "c'");
        assert_eq!(c[2].antiderivative(), Some(c[1]));
    }
}
