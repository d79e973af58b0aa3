// mdbook cannot run code blocks that depend on workspace crates, so each
// chapter is included as the docs of an empty module and `cargo test --doc`
// runs the blocks instead. One module per chapter keeps failures traceable.

#[doc = include_str!("../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../book/src/spectral.md")]
pub mod spectral {}
#[doc = include_str!("../../book/src/symbols.md")]
pub mod symbols {}
#[doc = include_str!("../../book/src/propagator.md")]
pub mod propagator {}
#[doc = include_str!("../../book/src/duhamel.md")]
pub mod duhamel {}
#[doc = include_str!("../../book/src/scattering.md")]
pub mod scattering {}
#[doc = include_str!("../../book/src/cli.md")]
pub mod cli {}
