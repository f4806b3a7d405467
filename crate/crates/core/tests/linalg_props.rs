use lrcgeom::{Field, Matrix, Solution};
use proptest::prelude::*;

fn matrix(q: u64) -> impl Strategy<Value = (Field, Vec<Vec<u32>>)> {
    let f = Field::with_order(q).unwrap();
    let order = f.order();
    (1usize..6, 1usize..7).prop_flat_map(move |(r, c)| {
        let f = f.clone();
        proptest::collection::vec(proptest::collection::vec(0..order, c), r).prop_map(move |rows| (f.clone(), rows))
    })
}

fn any_matrix() -> impl Strategy<Value = (Field, Vec<Vec<u32>>)> {
    prop_oneof![matrix(2), matrix(3), matrix(4), matrix(5), matrix(8), matrix(9)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn rank_of_transpose((f, rows) in any_matrix()) {
        let m = Matrix::from_rows(&f, &rows).unwrap();
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_is_annihilated_and_complementary((f, rows) in any_matrix()) {
        let m = Matrix::from_rows(&f, &rows).unwrap();
        let k = m.kernel_basis();
        prop_assert_eq!(k.rows() + m.rank(), m.cols());
        for i in 0..k.rows() {
            prop_assert!(m.mul_vec(k.row(i)).unwrap().iter().all(|&x| x == 0));
        }
        if k.rows() > 0 {
            prop_assert_eq!(k.rank(), k.rows());
        }
    }

    #[test]
    fn solve_recovers_an_image((f, rows) in any_matrix(), seed in any::<u64>()) {
        let m = Matrix::from_rows(&f, &rows).unwrap();
        let x: Vec<u32> = (0..m.cols()).map(|i| ((seed >> (i * 5)) as u32) % f.order()).collect();
        let b = m.mul_vec(&x).unwrap();
        match m.solve(&b).unwrap() {
            Solution::Consistent { particular, kernel } => {
                prop_assert_eq!(m.mul_vec(&particular).unwrap(), b);
                prop_assert_eq!(kernel.len(), m.cols() - m.rank());
            }
            Solution::Inconsistent => prop_assert!(false, "image vector reported inconsistent"),
        }
    }
}
