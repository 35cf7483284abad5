//! Safety properties, the test processes `T_σ`, may testing and the
//! synthesis of contexts separating failure-trace-inequivalent processes.

mod distinguish;
mod may;
mod safety;

pub use distinguish::{distinguish, plug, replay_context, Distinction, TestReport};
pub use may::{
    build_test, check_duality, compose_test, fresh_rename, interface, is_fresh, may_pass, may_preorder, may_verdict,
    member_by_test, primed, test_context, MayVerdict,
};
pub use safety::{safety_general, safety_holds, SafetyVerdict};
