#![allow(dead_code)] // each test target uses a different subset of the fixtures

//! Shared fixtures for the integration suites.

pub mod dense;

use std::sync::Arc;

use qdelsim::css::QRSCode;
use qdelsim::field::FieldSpec;
use qdelsim::pipeline::CodeParams;
use qdelsim::reed_solomon::{build_pair, RSCodePair, RSParams};
use qdelsim::sandwich::AsmLayout;

/// E=2, N=3, K_C=K_D=2, t=1: 12 physical qubits, 2 logical qubits.
pub fn grid1_params() -> CodeParams {
    CodeParams { extension_degree: 2, n: 3, k_c: 2, k_d: 2, t: 1 }
}

/// E=3, N=7, K_C=3, K_D=5, t=2: 49 physical qubits, 3 logical qubits.
pub fn grid2_params() -> CodeParams {
    CodeParams { extension_degree: 3, n: 7, k_c: 3, k_d: 5, t: 2 }
}

pub fn build(params: &CodeParams) -> (QRSCode, AsmLayout) {
    qdelsim::pipeline::build_code(params).expect("grid code builds")
}

pub fn rs_pair(e: u32, n: usize, k_c: usize, k_d: usize, t: usize) -> RSCodePair {
    let spec = Arc::new(FieldSpec::new(e).unwrap());
    build_pair(RSParams::new(n, k_c, k_d, t, spec).unwrap()).unwrap()
}

/// All deletion patterns of size exactly `size` over 1..=n, lexicographic.
pub fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), 1usize)];
    while let Some((prefix, next)) = stack.pop() {
        if prefix.len() == size {
            out.push(prefix);
            continue;
        }
        for p in (next..=n).rev() {
            let mut ext = prefix.clone();
            ext.push(p);
            stack.push((ext, p + 1));
        }
    }
    out
}
