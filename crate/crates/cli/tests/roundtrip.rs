use ortho_moments::ExponentMatrix;
use ortho_moments_cli::{parse_matrix, render_matrix};
use proptest::prelude::*;

fn matrices() -> impl Strategy<Value = ExponentMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(p, q)| {
        prop::collection::vec(0u32..1000, p * q)
            .prop_map(move |e| ExponentMatrix::new(p, q, e).unwrap())
    })
}

proptest! {
    #[test]
    fn parse_inverts_render(a in matrices()) {
        prop_assert_eq!(parse_matrix(&render_matrix(&a)).unwrap(), a);
    }

    #[test]
    fn whitespace_is_ignored(a in matrices()) {
        let spaced = render_matrix(&a).replace(',', " , ").replace(';', " ;\t");
        prop_assert_eq!(parse_matrix(&spaced).unwrap(), a);
    }
}
