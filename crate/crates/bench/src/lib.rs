// SPDX-License-Identifier: Apache-2.0

//! Inputs shared by the benchmarks.

use qcla_core::{AdderRequest, Function, ZeroRep};

/// Widths the generator benchmarks sweep.
pub const WIDTHS: [usize; 4] = [16, 64, 256, 1024];

/// One request per circuit family at width `n`, labelled.
pub fn requests(n: usize) -> Vec<(&'static str, AdderRequest)> {
    vec![
        ("add", AdderRequest::new(Function::Add, n)),
        ("add-ip", AdderRequest::new(Function::Add, n).in_place(true)),
        (
            "add-mod2n-ip",
            AdderRequest::new(Function::AddMod2n, n).in_place(true),
        ),
        ("compare", AdderRequest::new(Function::Compare, n)),
        (
            "mersenne-ip",
            AdderRequest::new(Function::AddMersenne, n)
                .in_place(true)
                .zero_rep(ZeroRep::Zeros),
        ),
    ]
}
