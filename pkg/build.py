import os
import subprocess
import sys
import shutil
import json
import argparse
import platform

PKG_ROOT = 'ssrsim'
PKG_INFO = 'pkg_info.json'
DIST_DIR = 'dist'
ARTIFACTS_DIR = 'release-artifacts'
WHL_FORMAT = 'ssr_simulator-{version}-py3-none-any.whl'

DOCS_FORMAT = 'ssr-simulator-{version}-docs'
DOCS_DIR = 'docs'

parser = argparse.ArgumentParser(description='Builds the ssr-simulator wheel and docs bundle')
parser.add_argument('--version', help='version to write to pkg_info.json before building')
parser.add_argument('--skip-tests', default=False, action='store_true')
parser.add_argument('--skip-docs', default=False, action='store_true')


class StageFailed(Exception):

    def __init__(self, title, reason):
        super().__init__('{0}: {1}'.format(title, reason))
        self.title = title


class Builder:
    """
    Runs the build stages in order and stops at the first one that fails
    """

    def __init__(self, args):
        self.args = args
        self.project_path = os.path.dirname(os.path.abspath(__file__))
        self.results = []
        self.version = None

    def _banner(self, title):
        print('================================================')
        print(title)
        print('================================================')

    def _run(self, *cmd):
        print('Executing: {0}'.format(' '.join(cmd)))
        completed = subprocess.run(cmd, stdout=sys.stdout, stderr=sys.stderr, cwd=self.project_path)
        return completed.returncode

    def _stage(self, title, action):
        self._banner(title)
        try:
            action()
        except StageFailed as e:
            print('ERROR: {0}\n'.format(e))
            self.results.append((title, False))
            raise
        self.results.append((title, True))
        print('')

    def report(self):
        self._banner('Build Result')
        for title, ok in self.results:
            print('  {0} - {1}'.format(title, 'OK' if ok else 'FAILED'))
        print(' ')

    def run(self):
        print('Building at: {0}'.format(self.project_path))
        stages = []
        if self.args.version is not None:
            stages.append(('Updating Version', self.write_version))
        stages.append(('Gathering Version', self.read_version))
        if not self.args.skip_tests:
            stages.append(('Run Unit Tests', self.run_unit_tests))
        stages.append(('Build Wheel', self.build_python_wheel))
        if not self.args.skip_docs:
            stages.append(('Package Docs', self.pkg_docs))
        try:
            for title, action in stages:
                self._stage(title, action)
        except StageFailed:
            self.report()
            return 1
        self.report()
        return 0

    def _pkg_info_path(self):
        return os.path.join(self.project_path, PKG_ROOT, PKG_INFO)

    def write_version(self):
        path = self._pkg_info_path()
        with open(path, 'r') as f:
            pkg_info = json.load(f)
        print('Setting version in {0} to {1}'.format(path, self.args.version))
        pkg_info['version'] = self.args.version
        with open(path, 'w') as f:
            json.dump(pkg_info, f)

    def read_version(self):
        path = self._pkg_info_path()
        with open(path, 'r') as f:
            pkg_info = json.load(f)
        if 'version' not in pkg_info:
            raise StageFailed('Gathering Version', '\'version\' not found in {0}'.format(path))
        self.version = pkg_info['version']
        print('Found version is: {0}'.format(self.version))

    def run_unit_tests(self):
        if self._run('python3', '-m', 'unittest') != 0:
            raise StageFailed('Run Unit Tests', 'unit tests failed')

    def build_python_wheel(self):
        dist_path = os.path.join(self.project_path, DIST_DIR)
        if os.path.exists(dist_path):
            shutil.rmtree(dist_path)
        if self._run('python3', 'setup.py', 'bdist_wheel') != 0:
            raise StageFailed('Build Wheel', 'setup.py bdist_wheel failed')
        whl_path = os.path.join(dist_path, WHL_FORMAT.format(version=self.version))
        if not os.path.exists(whl_path):
            raise StageFailed('Build Wheel', 'Could not find whl at: {0}'.format(whl_path))

    def pkg_docs(self):
        artifacts_path = os.path.join(self.project_path, ARTIFACTS_DIR)
        if os.path.exists(artifacts_path):
            shutil.rmtree(artifacts_path)
        os.makedirs(artifacts_path)
        docs_output = DOCS_FORMAT.format(version=self.version)
        docs_file = os.path.join(artifacts_path, docs_output + '.tgz')
        # bsd tar on macOS renames with -s, gnu tar with --transform
        if platform.system() == 'Darwin':
            code = self._run('tar', '-cvz', '-s', '/{0}/{1}/'.format(DOCS_DIR, docs_output), '-f', docs_file, DOCS_DIR + '/')
        else:
            code = self._run('tar', '-cvzf', docs_file, DOCS_DIR + '/', '--transform', 's/{0}/{1}/'.format(DOCS_DIR, docs_output))
        if code != 0:
            raise StageFailed('Package Docs', 'tar exited with {0}'.format(code))

def main():
    sys.exit(Builder(parser.parse_args()).run())

if __name__ == '__main__':
    main()
