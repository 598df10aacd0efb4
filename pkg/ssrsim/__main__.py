import sys
from ssrsim.app import init_app

# The main method below is used when running the application on the command line (either as ssr or python3 -m ssrsim).

def main():
    sys.exit(init_app())

if __name__ == '__main__':
    main()
