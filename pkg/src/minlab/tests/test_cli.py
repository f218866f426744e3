import contextlib
import io
import json
import os
import shutil
import tempfile
import unittest

from .. import __version__
from ..__main__ import _main, EXIT_OK, EXIT_INPUT, EXIT_VIOLATION

def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = _main(list(argv))
    return code, out.getvalue(), err.getvalue()

class TestCli(unittest.TestCase):
    def setUp(self):
        self._dirname = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self._dirname)

    def test_no_arguments(self):
        code, out, _ = run()
        self.assertEqual(code, EXIT_OK)
        self.assertIn('usage', out)

    def test_classify(self):
        code, out, _ = run('classify', 'Z', 'C(2,1)^w (+) C(3,1)^w')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('Z', out)

    def test_bad_descriptor(self):
        code, _, err = run('classify', 'C(4,1)')
        self.assertEqual(code, EXIT_INPUT)
        self.assertIn('4 is not prime', err)

    def test_json(self):
        code, out, _ = run('classify', 'Z', '--format', 'json', '--seed', '7')
        self.assertEqual(code, EXIT_OK)
        doc = json.loads(out)
        self.assertEqual((doc['seed'], doc['version'], doc['command']), (7, __version__, 'classify'))
        self.assertEqual(len(doc['result']), 1)

    def test_witness_requires_chain(self):
        self.assertEqual(run('witness', 'Z')[0], EXIT_OK)
        self.assertEqual(run('witness', 'cofinal(2)', '--require-chain')[0], EXIT_INPUT)

    def test_verify_chain(self):
        self.assertEqual(run('verify-chain', 'Z')[0], EXIT_OK)
        code, out, _ = run('verify-chain', 'Z', '--drop', '1')
        self.assertEqual(code, EXIT_VIOLATION)
        self.assertIn('19', out)

    def test_verify_report(self):
        code, out, _ = run('witness', 'C(2,1)^w (+) C(2,2)^w', '--format', 'json', '--kmax', '8', '--mmax', '8')
        self.assertEqual(code, EXIT_OK)
        fname = os.path.join(self._dirname, 'report.json')
        with open(fname, 'w') as fout:
            fout.write(out)
        self.assertEqual(run('verify-chain', '--report', fname, '--kmax', '8', '--mmax', '8')[0], EXIT_OK)

    def test_oracle_diff(self):
        code, out, _ = run('oracle-diff', '--max-order', '16', '--kmax', '4', '--mmax', '4')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('24', out)

    def test_directed_file(self):
        fname = os.path.join(self._dirname, 'family.txt')
        with open(fname, 'w') as fout:
            fout.write('6\n1 2 3 4\n1 2\n5 6\n')
        code, out, _ = run('directed', fname)
        self.assertEqual(code, EXIT_OK)
        self.assertIn('order:', out)

        with open(fname, 'w') as fout:
            fout.write('4\n1 2 3\n3 4\n')
        code, out, _ = run('directed', fname)
        self.assertEqual(code, EXIT_VIOLATION)
        self.assertIn('not directed', out)

    def test_directed_demo(self):
        self.assertEqual(run('directed', '--demo')[0], EXIT_OK)
        self.assertEqual(run('directed', '--random', '2', '--points', '200', '--members', '300')[0], EXIT_OK)
        self.assertEqual(run('directed')[0], EXIT_INPUT)

    def test_ordered(self):
        code, out, _ = run('ordered', 'integers')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('not convexly orderable', out)
        code, out, _ = run('ordered', '--field', 'rationals', '--samples', '2,3')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('no 2-th root', out)

    def test_valued(self):
        code, out, _ = run('valued', '--mode', 'random', '--n', '2', '--trials', '200')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('200 orders tried', out)
        code, _, err = run('valued', '--gamma1', '2')
        self.assertEqual(code, EXIT_INPUT)
        self.assertIn('2 divides gamma1', err)
        code, out, _ = run('valued', '--value-group', 'integers', '--label', 'Q_p')
        self.assertEqual(code, EXIT_OK)
        self.assertIn('Q_p: not quasi-VC-minimal (prime 2)', out)

    def test_report(self):
        self.assertEqual(run('report', '--kmax', '8', '--mmax', '8')[0], EXIT_OK)

if __name__ == '__main__':
    unittest.main()
